// Acceptance suite: every release gate in one binary, one pass/fail line per
// criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "chartlint/eval.hpp"
#include "chartlint/genset.hpp"
#include "chartlint/lint_batch.hpp"
#include "chartlint/rules_reference.hpp"
#include "chartlint/scoring.hpp"
#include "curated_cases.hpp"
#include "test_support.hpp"

using namespace chartlint;
using namespace chartlint::testing;
using nlohmann::json;

namespace {

struct Harness {
    int failures = 0;

    void criterion(int number, const std::string& name, std::function<std::string()> body) {
        std::string detail;
        bool passed = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            detail = body();  // empty string means pass
            passed = detail.empty();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", passed ? "PASS" : "FAIL", number,
                    name.c_str(), elapsed, detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!passed) ++failures;
    }
};

std::string join(const std::set<std::string, std::less<>>& names) {
    std::string out = "{";
    for (const auto& n : names) {
        if (out.size() > 1) out += ", ";
        out += n;
    }
    return out + "}";
}

// ---- criterion bodies ----------------------------------------------------

std::string rule_engine_exactness() {
    const auto start = std::chrono::steady_clock::now();
    CuratedSuite suite;
    if (suite.cases.size() != 54) return "expected 54 curated cases";
    std::set<std::string> covered;
    for (const auto& c : suite.cases) {
        covered.insert(c.rule);
        const auto got = lint(c.spec, *c.table);
        if (!(got.names == c.expected)) {
            return c.rule + ": got " + join(got.names) + ", expected " + join(c.expected);
        }
    }
    if (covered.size() != 54) return "curated suite does not cover all 54 rules";
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed >= 1.0) return "took " + std::to_string(elapsed) + "s, limit is 1s";
    return "";
}

std::string threshold_sharpness() {
    struct Case {
        const char* rule;
        std::size_t threshold;
        std::function<std::pair<ChartSpec, DataTable>(std::size_t)> build;
    };
    const std::vector<Case> cases = {
        {"high_cardinality_ordinal", 30,
         [](std::size_t n) {
             return std::make_pair(
                 make_spec(MarkType::text, {{Channel::x, "n", ScaleType::linear},
                                            {Channel::text, "v", ScaleType::ordinal}}),
                 distinct_strings_table(n));
         }},
        {"high_cardinality_categorical_grt10", 10,
         [](std::size_t n) {
             return std::make_pair(
                 make_spec(MarkType::text, {{Channel::x, "n", ScaleType::linear},
                                            {Channel::text, "v", ScaleType::categorical}}),
                 distinct_strings_table(n));
         }},
        {"high_cardinality_shape", 8,
         [](std::size_t n) {
             return std::make_pair(
                 make_spec(MarkType::point, {{Channel::x, "n", ScaleType::linear},
                                             {Channel::shape, "v", ScaleType::linear}}),
                 distinct_strings_table(n));
         }},
        {"high_cardinality_size", 100,
         [](std::size_t n) {
             return std::make_pair(
                 make_spec(MarkType::text, {{Channel::x, "big", ScaleType::linear},
                                            {Channel::size, "n", ScaleType::linear}}),
                 distinct_numbers_table(n));
         }},
        {"horizontal_scrolling_x", 50,
         [](std::size_t n) {
             return std::make_pair(
                 make_spec(MarkType::text, {{Channel::x, "big", ScaleType::linear, true},
                                            {Channel::detail, "n", ScaleType::linear}}),
                 distinct_numbers_table(n));
         }},
    };
    for (const auto& c : cases) {
        const auto [at_spec, at_table] = c.build(c.threshold);
        if (lint(at_spec, at_table).contains(c.rule)) {
            return std::string(c.rule) + " fired at exactly " + std::to_string(c.threshold);
        }
        const auto [over_spec, over_table] = c.build(c.threshold + 1);
        if (!lint(over_spec, over_table).contains(c.rule)) {
            return std::string(c.rule) + " silent at " + std::to_string(c.threshold + 1);
        }
    }
    return "";
}

std::string two_implementation_cross_check() {
    const auto tables = bundled_tables();
    Rng rng(4242);
    SamplerParams params;
    for (int i = 0; i < 1000; ++i) {
        const auto& table = tables[rng.index(tables.size())];
        const ChartSpec spec = sample_spec(rng, table, params);
        const auto engine = lint(spec, table);
        const auto naive = reference::lint_reference(spec, table);
        if (!(engine == naive)) {
            return "disagreement on pair " + std::to_string(i) + ": engine " +
                   join(engine.names) + " vs reference " + join(naive.names) + " for\n" +
                   emit_spec(spec);
        }
    }
    return "";
}

std::string kl_filter_efficacy() {
    const auto start = std::chrono::steady_clock::now();
    const auto tables = bundled_tables();
    for (std::uint64_t seed : {101, 102, 103, 104, 105}) {
        GenConfig filtered;
        filtered.target_size = 500;
        filtered.seed = seed;
        filtered.tables = tables;
        std::string violation;
        filtered.observer = [&](const AcceptEvent& e) {
            if (e.branch == AcceptBranch::deterministic && e.accepted &&
                e.kl_old - e.kl_new < filtered.epsilon) {
                violation = "deterministic acceptance with drop " +
                            std::to_string(e.kl_old - e.kl_new) + " < epsilon";
            }
        };
        GenConfig unfiltered = filtered;
        unfiltered.observer = nullptr;
        unfiltered.filter = false;

        const double kl_f = generate_dataset(filtered).kl_trace.back();
        const double kl_u = generate_dataset(unfiltered).kl_trace.back();
        if (!violation.empty()) return violation;
        if (!(kl_f < kl_u)) {
            return "seed " + std::to_string(seed) + ": filtered " + std::to_string(kl_f) +
                   " !< unfiltered " + std::to_string(kl_u);
        }
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed >= 300.0) return "took " + std::to_string(elapsed) + "s, limit is 300s";
    return "";
}

std::string acceptance_law() {
    Rng rng(606);
    const int draws = 100000;
    int accepted = 0;
    for (int i = 0; i < draws; ++i) {
        if (accept_candidate(0.5, 0.5 + 1e-4, 1e-3, 1e-4, rng)) ++accepted;
    }
    const double rate = static_cast<double>(accepted) / draws;
    if (std::abs(rate - 0.3679) > 0.01) {
        return "acceptance rate " + std::to_string(rate) + " outside 0.3679 +/- 0.01";
    }
    for (int i = 0; i < 1000; ++i) {
        const double kl_old = rng.uniform();
        const double delta = 1e-3 + rng.uniform();
        if (!accept_candidate(kl_old, kl_old - delta, 1e-3, 1e-4, rng)) {
            return "improvement of " + std::to_string(delta) + " was rejected";
        }
    }
    return "";
}

GenConfig full_scale_config() {
    GenConfig config;
    config.target_size = 2000;
    config.seed = 20250808;
    config.tables = bundled_tables();
    return config;
}

std::string dataset_integrity(const GenResult& result, const GenConfig& config) {
    if (result.instances.size() != 2000) {
        return "expected 2000 instances, got " + std::to_string(result.instances.size());
    }
    std::map<std::string, std::size_t> table_index;
    for (std::size_t t = 0; t < config.tables.size(); ++t) {
        table_index[config.tables[t].name] = t;
    }
    std::vector<TableProfiles> profiles;
    for (const auto& t : config.tables) profiles.push_back(profile_table(t));

    std::vector<LintItem> items;
    items.reserve(result.instances.size());
    for (const auto& inst : result.instances) {
        const std::size_t t = table_index.at(inst.table_ref);
        items.push_back({&inst.spec, &config.tables[t], &profiles[t]});
    }
    const auto fresh = lint_batch(items);
    for (std::size_t i = 0; i < fresh.size(); ++i) {
        if (!(fresh[i] == result.instances[i].violations)) {
            return "instance " + result.instances[i].id + " annotation differs from fresh lint";
        }
        if (!(parse_spec(result.instances[i].emitted_doc) == result.instances[i].spec)) {
            return "instance " + result.instances[i].id + " document does not round-trip";
        }
    }

    std::size_t covered = 0;
    for (const auto& rule : rule_catalog()) {
        if (result.histogram.counts.count(rule.name) &&
            result.histogram.counts.at(rule.name) > 0) {
            ++covered;
        }
    }
    if (covered * 10 < rule_catalog().size() * 9) {
        return "only " + std::to_string(covered) + "/54 rules appear in the dataset";
    }
    return "";
}

std::string prompt_fidelity(const GenResult& result, const GenConfig& config) {
    static const std::string opening =
        "You are an expert in data visualization design using Vega-Lite.";
    static const std::string requirements =
        "## Output Requirements\n"
        "- Output **only** a valid JSON array of strings.\n"
        "- Each string must be an **exact match** to a problem name from the provided list "
        "(excluding the \"name :\" prefix).\n"
        "- Do **not** add explanations, reasoning, or any extra text.\n"
        "- If no problems match, return an empty JSON array: []";

    std::map<std::string, const DataTable*> tables;
    for (const auto& t : config.tables) tables[t.name] = &t;
    const auto tpl = prompt_templates()[0];

    for (std::size_t i = 0; i < 200; ++i) {
        const auto& inst = result.instances[i];
        const DataTable* table = tables.at(inst.table_ref);
        const std::string prompt =
            build_prompt(tpl, rule_catalog(), inst, table, Phrasing::natural, nullptr);
        if (prompt.rfind(opening, 0) != 0) {
            return "instance " + inst.id + ": prompt does not open with the template line";
        }
        if (prompt.find(requirements) == std::string::npos) {
            return "instance " + inst.id + ": output-requirement block missing or altered";
        }
        const auto doc_start = prompt.find("{\n  \"mark\"");
        if (doc_start == std::string::npos) return "instance " + inst.id + ": no document";
        const auto doc_end = prompt.find("\n}", doc_start);
        const auto doc = json::parse(prompt.substr(doc_start, doc_end + 2 - doc_start));
        const std::size_t embedded = doc.at("data").at("values").size();
        const std::size_t expected = std::min<std::size_t>(50, table->rows.size());
        if (embedded != expected) {
            return "instance " + inst.id + ": " + std::to_string(embedded) + " rows embedded, " +
                   "expected " + std::to_string(expected);
        }
    }
    return "";
}

std::string parser_conformance() {
    const auto catalog = rule_catalog();
    std::ifstream in(std::string(CHARTLINT_GOLDEN_DIR) + "/outputs/cases.jsonl");
    if (!in) return "golden case file missing";
    std::string line;
    int count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++count;
        const auto c = json::parse(line);
        const auto outcome = parse_output(c["raw"].get<std::string>(), catalog);
        const std::string name = c["name"].get<std::string>();
        if (c["expect"].is_null()) {
            if (outcome.names) return name + ": expected a parse failure";
        } else {
            if (!outcome.names) return name + ": unexpected parse failure: " + outcome.error;
            if (*outcome.names != c["expect"].get<std::vector<std::string>>()) {
                return name + ": wrong parse result";
            }
        }
    }
    if (count != 30) return "expected 30 golden cases, found " + std::to_string(count);

    const auto pinned = parse_output("[\"log_x\", \"c_c_line\"]", catalog);
    if (!pinned.names || *pinned.names != std::vector<std::string>{"log_x", "c_c_line"}) {
        return "pinned example did not parse to exactly {log_x, c_c_line}";
    }
    return "";
}

std::string oracle_end_to_end() {
    const auto start = std::chrono::steady_clock::now();
    GenConfig config;
    config.target_size = 100;
    config.seed = 31337;
    config.tables = bundled_tables();
    const auto result = generate_dataset(config);

    std::map<std::string, ViolationSet> truth;
    for (const auto& inst : result.instances) truth[inst.id] = inst.violations;

    RunEvalOptions options;
    options.k = 5;
    options.seed = 77;

    auto oracle = make_oracle_endpoint(truth);
    const auto oracle_metrics =
        score(run_eval(result.instances, *oracle, options), truth, rule_catalog());
    if (oracle_metrics.adherence != 1.0) {
        return "oracle adherence " + std::to_string(oracle_metrics.adherence) + " != 1.00";
    }
    if (oracle_metrics.global_avg != 1.0) {
        return "oracle global average " + std::to_string(oracle_metrics.global_avg) + " != 1.00";
    }

    auto empty = make_empty_endpoint();
    const auto empty_metrics =
        score(run_eval(result.instances, *empty, options), truth, rule_catalog());
    if (empty_metrics.adherence != 1.0) {
        return "empty-mock adherence " + std::to_string(empty_metrics.adherence) + " != 1.00";
    }
    if (empty_metrics.global_avg != 0.0) {
        return "empty-mock global average " + std::to_string(empty_metrics.global_avg) +
               " != 0.00";
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed >= 60.0) return "took " + std::to_string(elapsed) + "s, limit is 60s";
    return "";
}

std::string metric_semantics() {
    std::map<std::string, ViolationSet> truth;
    std::vector<EvalRecord> records;
    for (int i = 0; i < 100; ++i) {
        const std::string id = "m-" + std::to_string(i);
        truth[id].names.insert("log_x");
        EvalRecord record;
        record.instance_id = id;
        record.repetition = 1;
        record.template_index = 1;
        if (i < 98) {
            record.parsed = std::vector<std::string>{"log_x"};
            record.adherent = true;
        } else {
            record.failure = FailureKind::parse;
        }
        records.push_back(std::move(record));
    }
    const auto metrics = score(records, truth, rule_catalog());
    if (metrics.adherence != 0.98) {
        return "adherence " + std::to_string(metrics.adherence) + " != 0.98";
    }
    if (metrics.records_adherent != 98 || metrics.records_total != 100) {
        return "confusion in adherent/total bookkeeping";
    }
    return "";
}

}  // namespace

int main() {
    Harness harness;

    harness.criterion(1, "rule-engine exactness on the curated 54-case suite",
                      rule_engine_exactness);
    harness.criterion(2, "cardinality threshold sharpness at 30/10/8/100/50",
                      threshold_sharpness);
    harness.criterion(3, "engine agrees with the naive reference on 1000 random pairs",
                      two_implementation_cross_check);
    harness.criterion(4, "divergence filter beats no-filter on 5/5 seeds at 500 instances",
                      kl_filter_efficacy);
    harness.criterion(5, "acceptance law: exp(-1) Monte-Carlo rate and epsilon rule",
                      acceptance_law);

    GenConfig full_config = full_scale_config();
    GenResult full_result;
    bool generated = false;
    harness.criterion(6, "2000-instance dataset integrity and round-trip", [&] {
        const auto start = std::chrono::steady_clock::now();
        full_result = generate_dataset(full_config);
        generated = true;
        auto detail = dataset_integrity(full_result, full_config);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (detail.empty() && elapsed >= 600.0) {
            detail = "took " + std::to_string(elapsed) + "s, limit is 600s";
        }
        return detail;
    });
    harness.criterion(7, "prompt fidelity: opening line, requirement block, 50-row cap", [&] {
        if (!generated) return std::string("skipped: dataset generation failed");
        return prompt_fidelity(full_result, full_config);
    });
    harness.criterion(8, "parser conformance on the 30-case golden suite", parser_conformance);
    harness.criterion(9, "oracle and empty mocks end-to-end at k=5", oracle_end_to_end);
    harness.criterion(10, "adherence formula: 98 adherent of 100 records is exactly 0.98",
                      metric_semantics);

    if (harness.failures > 0) {
        std::printf("%d criterion(s) failed\n", harness.failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
