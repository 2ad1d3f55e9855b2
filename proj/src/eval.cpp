#include "chartlint/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "chartlint/rng.hpp"

namespace chartlint {

using nlohmann::json;

namespace {

// Complete ``` ... ``` blocks; an unmatched opener is not a block. The opener
// may carry a language tag on the same line.
std::vector<std::string_view> fenced_blocks(std::string_view text) {
    std::vector<std::size_t> fences;
    for (std::size_t pos = text.find("```"); pos != std::string_view::npos;
         pos = text.find("```", pos + 3)) {
        fences.push_back(pos);
    }
    std::vector<std::string_view> blocks;
    for (std::size_t i = 0; i + 1 < fences.size(); i += 2) {
        std::size_t begin = fences[i] + 3;
        while (begin < fences[i + 1] &&
               (std::isalnum(static_cast<unsigned char>(text[begin])) || text[begin] == '_' ||
                text[begin] == '-' || text[begin] == '+')) {
            ++begin;  // language tag
        }
        if (begin < fences[i + 1] && text[begin] == '\r') ++begin;
        if (begin < fences[i + 1] && text[begin] == '\n') ++begin;
        if (begin <= fences[i + 1]) blocks.push_back(text.substr(begin, fences[i + 1] - begin));
    }
    return blocks;
}

// The span of the first complete bracketed literal starting at `open`,
// honoring strings and escapes; npos when unbalanced.
std::size_t matching_bracket(std::string_view text, std::size_t open) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = open; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '[') {
            ++depth;
        } else if (c == ']') {
            if (--depth == 0) return i;
        }
    }
    return std::string_view::npos;
}

}  // namespace

ParseOutcome parse_output(std::string_view raw, std::span<const RuleDescriptor> catalog) {
    std::string_view region = raw;
    const auto blocks = fenced_blocks(raw);
    if (!blocks.empty()) region = blocks.back();

    // first well-formed array-of-strings literal in the region
    for (std::size_t open = region.find('['); open != std::string_view::npos;
         open = region.find('[', open + 1)) {
        const std::size_t close = matching_bracket(region, open);
        if (close == std::string_view::npos) continue;
        const json candidate =
            json::parse(region.substr(open, close - open + 1), nullptr, false);
        if (candidate.is_discarded() || !candidate.is_array()) continue;
        if (!std::all_of(candidate.begin(), candidate.end(),
                         [](const json& v) { return v.is_string(); })) {
            continue;
        }

        std::vector<std::string> names;
        std::set<std::string> seen;
        for (const auto& v : candidate) {
            const auto name = v.get<std::string>();
            bool known = false;
            for (const auto& rule : catalog) {
                if (rule.name == name) {
                    known = true;
                    break;
                }
            }
            if (!known) {
                return {std::nullopt, "'" + name + "' is not a problem name"};
            }
            if (seen.insert(name).second) names.push_back(name);  // keep-first dedup
        }
        return {std::move(names), ""};
    }
    return {std::nullopt, "no array-of-strings literal found"};
}

int assign_template(std::uint64_t seed, std::string_view instance_id, int repetition) {
    const std::uint64_t h =
        splitmix64(splitmix64(seed ^ fnv1a64(instance_id)) + static_cast<std::uint64_t>(repetition));
    return 1 + static_cast<int>(h % 5);
}

std::string record_to_line(const EvalRecord& record) {
    json obj = json::object();
    obj["instance_id"] = record.instance_id;
    obj["repetition"] = record.repetition;
    obj["template_index"] = record.template_index;
    obj["raw_output"] = record.raw_output;
    if (record.parsed) {
        obj["parsed"] = *record.parsed;
    } else {
        obj["parsed"] = nullptr;
    }
    obj["adherent"] = record.adherent;
    obj["latency_s"] = record.latency_s;
    obj["failure"] = record.failure ? json(std::string(to_string(*record.failure))) : json();
    return obj.dump();
}

EvalRecord record_from_line(std::string_view line) {
    const json obj = json::parse(line);
    EvalRecord record;
    record.instance_id = obj.at("instance_id").get<std::string>();
    record.repetition = obj.at("repetition").get<int>();
    record.template_index = obj.at("template_index").get<int>();
    record.raw_output = obj.at("raw_output").get<std::string>();
    if (!obj.at("parsed").is_null()) {
        record.parsed = obj["parsed"].get<std::vector<std::string>>();
    }
    record.adherent = obj.at("adherent").get<bool>();
    record.latency_s = obj.at("latency_s").get<double>();
    if (!obj.at("failure").is_null()) {
        const auto k = obj["failure"].get<std::string>();
        if (k == "timeout") record.failure = FailureKind::timeout;
        if (k == "transport") record.failure = FailureKind::transport;
        if (k == "parse") record.failure = FailureKind::parse;
    }
    return record;
}

std::vector<EvalRecord> read_records_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open records file '" + path + "'");
    std::vector<EvalRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) records.push_back(record_from_line(line));
    }
    return records;
}

std::vector<EvalRecord> run_eval(const std::vector<DatasetInstance>& dataset,
                                 Endpoint& endpoint, const RunEvalOptions& options) {
    if (dataset.empty()) throw std::invalid_argument("dataset is empty");
    if (options.k < 1) throw std::invalid_argument("k must be >= 1");

    struct Task {
        std::size_t dataset_index;
        int repetition;
        int template_index;
    };

    // Resume support: the records file doubles as the journal.
    std::vector<EvalRecord> done;
    std::set<std::pair<std::string, int>> completed;
    if (!options.journal_path.empty()) {
        std::ifstream in(options.journal_path, std::ios::binary);
        if (in) {
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                EvalRecord record = record_from_line(line);
                completed.emplace(record.instance_id, record.repetition);
                done.push_back(std::move(record));
            }
        }
    }

    std::vector<Task> tasks;
    tasks.reserve(dataset.size() * static_cast<std::size_t>(options.k));
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        for (int rep = 1; rep <= options.k; ++rep) {
            if (completed.count({dataset[i].id, rep})) continue;
            tasks.push_back(
                {i, rep, assign_template(options.seed, dataset[i].id, rep)});
        }
    }

    const auto catalog = rule_catalog();
    const auto templates = prompt_templates();

    std::mutex sink_mutex;
    std::ofstream journal;
    if (!options.journal_path.empty()) {
        journal.open(options.journal_path, std::ios::binary | std::ios::app);
        if (!journal) {
            throw std::runtime_error("cannot open journal '" + options.journal_path + "'");
        }
    }

    std::vector<EvalRecord> fresh;
    fresh.reserve(tasks.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) return;
            const Task& task = tasks[t];
            const DatasetInstance& instance = dataset[task.dataset_index];

            EvalRecord record;
            record.instance_id = instance.id;
            record.repetition = task.repetition;
            record.template_index = task.template_index;

            const std::string prompt =
                build_prompt(templates[static_cast<std::size_t>(task.template_index - 1)],
                             catalog, instance, nullptr, options.phrasing, nullptr);
            QueryResult response = endpoint.query(instance.id, task.repetition, prompt);
            record.latency_s = response.latency_s;

            if (response.text) {
                record.raw_output = *response.text;
                ParseOutcome outcome = parse_output(record.raw_output, catalog);
                if (outcome.names) {
                    record.parsed = std::move(outcome.names);
                    record.adherent = true;
                } else {
                    record.failure = FailureKind::parse;
                }
            } else {
                record.failure = response.failure;
            }

            std::lock_guard<std::mutex> lock(sink_mutex);
            if (journal.is_open()) journal << record_to_line(record) << '\n' << std::flush;
            fresh.push_back(std::move(record));
        }
    };

    const int threads = std::max(1, std::min<int>(options.max_parallel,
                                                  static_cast<int>(tasks.size())));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::vector<EvalRecord> all = std::move(done);
    all.insert(all.end(), std::make_move_iterator(fresh.begin()),
               std::make_move_iterator(fresh.end()));

    // deterministic order regardless of completion interleaving
    std::map<std::string_view, std::size_t> order;
    for (std::size_t i = 0; i < dataset.size(); ++i) order[dataset[i].id] = i;
    auto rank = [&](const EvalRecord& r) {
        auto it = order.find(r.instance_id);
        return it == order.end() ? dataset.size() : it->second;  // stale journal ids last
    };
    std::sort(all.begin(), all.end(), [&](const EvalRecord& a, const EvalRecord& b) {
        const auto ia = rank(a);
        const auto ib = rank(b);
        if (ia != ib) return ia < ib;
        if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
        return a.repetition < b.repetition;
    });
    return all;
}

}  // namespace chartlint
