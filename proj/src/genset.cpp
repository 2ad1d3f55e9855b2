#include "chartlint/genset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chartlint/errors.hpp"
#include "chartlint/lint_batch.hpp"

namespace chartlint {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::array<MarkType, 7> kMarks = {MarkType::point, MarkType::bar,  MarkType::line,
                                            MarkType::area,  MarkType::tick, MarkType::rect,
                                            MarkType::text};
constexpr std::array<Aggregate, 6> kAggregates = {Aggregate::count, Aggregate::mean,
                                                  Aggregate::sum,   Aggregate::median,
                                                  Aggregate::min,   Aggregate::max};

// Positional channels carry weight 2, the rest weight 1.
struct WeightedChannel {
    Channel channel;
    int weight;
};

constexpr std::array<WeightedChannel, 7> kChannelPool = {{
    {Channel::x, 2},
    {Channel::y, 2},
    {Channel::color, 1},
    {Channel::size, 1},
    {Channel::shape, 1},
    {Channel::text, 1},
    {Channel::detail, 1},
}};

std::vector<Channel> draw_channels(Rng& rng, std::size_t count) {
    std::vector<WeightedChannel> pool(kChannelPool.begin(), kChannelPool.end());
    std::vector<Channel> picked;
    picked.reserve(count);
    while (picked.size() < count && !pool.empty()) {
        int total = 0;
        for (const auto& wc : pool) total += wc.weight;
        int ticket = static_cast<int>(rng.index(static_cast<std::size_t>(total)));
        for (std::size_t i = 0; i < pool.size(); ++i) {
            ticket -= pool[i].weight;
            if (ticket < 0) {
                picked.push_back(pool[i].channel);
                pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
                break;
            }
        }
    }
    return picked;
}

// Legal scales per field kind; the complement provokes violations such as
// number_categorical or continuous scales on string fields.
ScaleType draw_scale(Rng& rng, FieldKind kind, double p_illegal) {
    static constexpr std::array<ScaleType, 3> legal_number = {ScaleType::linear, ScaleType::log,
                                                              ScaleType::ordinal};
    static constexpr std::array<ScaleType, 1> illegal_number = {ScaleType::categorical};
    static constexpr std::array<ScaleType, 2> legal_string = {ScaleType::ordinal,
                                                              ScaleType::categorical};
    static constexpr std::array<ScaleType, 2> illegal_string = {ScaleType::linear,
                                                                ScaleType::log};
    const bool illegal = rng.bernoulli(p_illegal);
    if (kind == FieldKind::number) {
        if (illegal) return illegal_number[rng.index(illegal_number.size())];
        return legal_number[rng.index(legal_number.size())];
    }
    if (illegal) return illegal_string[rng.index(illegal_string.size())];
    return legal_string[rng.index(legal_string.size())];
}

}  // namespace

ChartSpec sample_spec(Rng& rng, const DataTable& table, const SamplerParams& params) {
    const TableProfiles profiles = profile_table(table);

    for (int attempt = 0; attempt < 16; ++attempt) {
        ChartSpec spec;
        spec.mark = kMarks[rng.index(kMarks.size())];
        spec.data_ref = table.name;

        const std::size_t encoding_count = 1 + rng.index(4);  // 1..4
        for (Channel channel : draw_channels(rng, encoding_count)) {
            Encoding enc;
            enc.channel = channel;
            enc.field = table.columns[rng.index(table.columns.size())];
            enc.scale = draw_scale(rng, profiles.at(*enc.field).kind, params.p_illegal_scale);
            enc.binned = rng.bernoulli(params.p_bin);
            if (rng.bernoulli(params.p_aggregate)) {
                enc.aggregate = kAggregates[rng.index(kAggregates.size())];
            }
            spec.encodings.push_back(std::move(enc));
        }

        // At most one stacked encoding, positional only.
        for (auto& enc : spec.encodings) {
            if (!is_positional(enc.channel)) continue;
            if (rng.bernoulli(params.p_stack)) {
                enc.stacked = true;
                break;
            }
        }

        if (rng.bernoulli(params.p_polar)) spec.coordinates = Coordinates::polar;

        if (validate(spec).empty()) return spec;
    }
    // Unreachable with the current construction, which satisfies the
    // invariants by design; kept as a hard stop for future sampler edits.
    throw std::logic_error("sample_spec failed to produce a valid spec");
}

double kl_to_uniform(std::span<const std::uint64_t> counts, double alpha) {
    if (counts.empty()) throw EmptyHistogram("histogram support is empty");
    const double k = static_cast<double>(counts.size());
    double total = 0.0;
    for (std::uint64_t c : counts) total += static_cast<double>(c);
    total += alpha * k;
    if (total <= 0.0) throw EmptyHistogram("histogram has no mass and no smoothing");

    // sum p_i * ln(p_i / u_i) with u uniform; p_i = 0 contributes 0.
    const double uniform = 1.0 / k;
    double kl = 0.0;
    for (std::uint64_t c : counts) {
        const double p = (static_cast<double>(c) + alpha) / total;
        if (p > 0.0) kl += p * std::log(p / uniform);
    }
    return std::max(kl, 0.0);  // clamp float noise on the uniform case
}

double kl_to_uniform(const ProblemHistogram& hist) {
    const auto catalog = rule_catalog();
    std::vector<std::uint64_t> counts(catalog.size(), 0);
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        auto it = hist.counts.find(catalog[i].name);
        if (it != hist.counts.end()) counts[i] = it->second;
    }
    return kl_to_uniform(counts, 1.0);
}

void ProblemHistogram::add(const ViolationSet& v) {
    for (const auto& name : v.names) ++counts[name];
}

bool accept_candidate(double kl_old, double kl_new, double epsilon, double temperature,
                      Rng& rng) {
    const double delta = kl_old - kl_new;
    if (delta >= epsilon) return true;
    const double p = std::min(1.0, std::exp(delta / temperature));
    return rng.uniform() < p;
}

GenResult generate_dataset(const GenConfig& config) {
    if (config.tables.empty()) throw std::invalid_argument("no tables configured");
    if (config.target_size < 1) throw std::invalid_argument("target_size must be >= 1");
    if (config.epsilon <= 0 || config.temperature <= 0) {
        throw std::invalid_argument("epsilon and temperature must be positive");
    }

    const std::size_t max_candidates =
        config.max_candidates ? config.max_candidates : config.target_size * 1000;

    std::vector<TableProfiles> profiles;
    profiles.reserve(config.tables.size());
    for (const auto& table : config.tables) profiles.push_back(profile_table(table));

    Rng rng(config.seed);
    GenResult result;
    ProblemHistogram& hist = result.histogram;
    double kl = kl_to_uniform(hist);

    std::size_t candidate_index = 0;
    while (result.instances.size() < config.target_size && candidate_index < max_candidates) {
        ++candidate_index;
        const std::size_t t = rng.index(config.tables.size());
        const DataTable& table = config.tables[t];

        ChartSpec spec = sample_spec(rng, table, config.sampler);
        ViolationSet violations = lint(spec, table, profiles[t]);
        if (violations.names.empty()) continue;  // nothing to detect, not a benchmark item

        ProblemHistogram tentative = hist;
        tentative.add(violations);
        const double kl_new = kl_to_uniform(tentative);

        bool accepted;
        AcceptBranch branch;
        if (!config.filter || result.instances.size() < config.bootstrap_window) {
            accepted = true;
            branch = AcceptBranch::bootstrap;
        } else if (kl - kl_new >= config.epsilon) {
            accepted = true;
            branch = AcceptBranch::deterministic;
        } else {
            accepted = accept_candidate(kl, kl_new, config.epsilon, config.temperature, rng);
            branch = AcceptBranch::probabilistic;
        }
        if (config.observer) {
            config.observer({candidate_index, kl, kl_new, accepted, branch});
        }
        if (!accepted) continue;

        DatasetInstance inst;
        char id[16];
        std::snprintf(id, sizeof(id), "%06zu", result.instances.size() + 1);
        inst.id = id;
        inst.table_ref = table.name;
        inst.emitted_doc = emit_spec_with_data(spec, table, config.inline_rows);
        inst.spec = std::move(spec);
        inst.violations = std::move(violations);
        inst.seed = config.seed;
        inst.candidate_index = candidate_index;
        result.instances.push_back(std::move(inst));

        hist = std::move(tentative);
        kl = kl_new;
        result.kl_trace.push_back(kl);
    }
    result.candidates_examined = candidate_index;

    if (result.instances.size() < config.target_size) {
        throw BudgetExhausted("generated " + std::to_string(result.instances.size()) + " of " +
                              std::to_string(config.target_size) + " instances in " +
                              std::to_string(max_candidates) + " candidates");
    }

    // Stored annotations must match a fresh lint; instances are independent,
    // so the verification pass runs on the parallel kernel.
    {
        std::vector<LintItem> items;
        items.reserve(result.instances.size());
        for (const auto& inst : result.instances) {
            for (std::size_t t = 0; t < config.tables.size(); ++t) {
                if (config.tables[t].name == inst.table_ref) {
                    items.push_back({&inst.spec, &config.tables[t], &profiles[t]});
                    break;
                }
            }
        }
        const auto fresh = lint_batch(items);
        for (std::size_t i = 0; i < fresh.size(); ++i) {
            if (!(fresh[i] == result.instances[i].violations)) {
                throw std::logic_error("stored violations diverged from fresh lint for instance " +
                                       result.instances[i].id);
            }
        }
    }

    return result;
}

namespace {

ojson violations_to_json(const ViolationSet& v) {
    ojson arr = ojson::array();
    for (const auto& name : v.names) arr.push_back(name);  // std::set keeps them sorted
    return arr;
}

}  // namespace

std::string dataset_record_line(const DatasetInstance& inst, const GenConfig& config) {
    ojson record = ojson::object();
    record["id"] = inst.id;
    record["table_ref"] = inst.table_ref;
    record["spec"] = ojson::parse(emit_spec(inst.spec));
    record["emitted_doc"] = inst.emitted_doc;
    record["violations"] = violations_to_json(inst.violations);
    record["generator"] = ojson{{"seed", config.seed},
                                {"epsilon", config.epsilon},
                                {"temperature", config.temperature},
                                {"candidate", inst.candidate_index}};
    return record.dump();
}

std::vector<DatasetInstance> read_dataset(std::string_view jsonl) {
    std::vector<DatasetInstance> instances;
    std::size_t start = 0;
    while (start < jsonl.size()) {
        std::size_t end = jsonl.find('\n', start);
        if (end == std::string_view::npos) end = jsonl.size();
        std::string_view line = jsonl.substr(start, end - start);
        start = end + 1;
        if (line.empty()) continue;

        ojson record;
        try {
            record = ojson::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw MalformedDocument(std::string("dataset line is not a record: ") + e.what());
        }
        DatasetInstance inst;
        inst.id = record.at("id").get<std::string>();
        inst.table_ref = record.at("table_ref").get<std::string>();
        inst.spec = parse_spec(record.at("spec").dump());
        inst.emitted_doc = record.at("emitted_doc").get<std::string>();
        for (const auto& name : record.at("violations")) {
            inst.violations.names.insert(name.get<std::string>());
        }
        if (record.contains("generator")) {
            const auto& gen = record["generator"];
            if (gen.contains("seed")) inst.seed = gen["seed"].get<std::uint64_t>();
            if (gen.contains("candidate")) {
                inst.candidate_index = gen["candidate"].get<std::uint64_t>();
            }
        }
        instances.push_back(std::move(inst));
    }
    return instances;
}

std::string manifest_json(const GenResult& result, const GenConfig& config) {
    ojson hist = ojson::object();
    for (const auto& rule : rule_catalog()) {
        auto it = result.histogram.counts.find(rule.name);
        hist[rule.name] = it == result.histogram.counts.end() ? 0 : it->second;
    }
    ojson manifest = ojson::object();
    manifest["config"] = ojson{{"target_size", config.target_size},
                               {"epsilon", config.epsilon},
                               {"temperature", config.temperature},
                               {"seed", config.seed},
                               {"max_candidates", config.max_candidates},
                               {"filter", config.filter},
                               {"bootstrap_window", config.bootstrap_window},
                               {"inline_rows", config.inline_rows},
                               {"sampler", ojson{{"p_illegal_scale", config.sampler.p_illegal_scale},
                                                 {"p_bin", config.sampler.p_bin},
                                                 {"p_aggregate", config.sampler.p_aggregate},
                                                 {"p_stack", config.sampler.p_stack},
                                                 {"p_polar", config.sampler.p_polar}}},
                               {"tables", [&] {
                                    ojson names = ojson::array();
                                    for (const auto& t : config.tables) names.push_back(t.name);
                                    return names;
                                }()}};
    manifest["instances"] = result.instances.size();
    manifest["candidates_examined"] = result.candidates_examined;
    manifest["final_kl"] = result.kl_trace.empty() ? 0.0 : result.kl_trace.back();
    manifest["kl_trace"] = result.kl_trace;
    manifest["histogram"] = std::move(hist);
    return manifest.dump(2);
}

namespace {

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out << content;
        if (!out.flush()) throw std::runtime_error("short write to '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

void write_dataset(const std::string& path, const GenResult& result, const GenConfig& config) {
    std::string body;
    for (const auto& inst : result.instances) {
        body += dataset_record_line(inst, config);
        body += '\n';
    }
    write_file_atomic(path, body);
    write_file_atomic(path + ".manifest.json", manifest_json(result, config) + "\n");
}

std::vector<DatasetInstance> read_dataset_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_dataset(buf.str());
}

}  // namespace chartlint
