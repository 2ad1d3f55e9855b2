#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chartlint/endpoint.hpp"
#include "chartlint/genset.hpp"
#include "chartlint/prompts.hpp"

namespace chartlint {

struct EvalRecord {
    std::string instance_id;
    int repetition = 0;      // 1..k
    int template_index = 0;  // 1..5
    std::string raw_output;
    std::optional<std::vector<std::string>> parsed;  // catalog names, deduplicated
    bool adherent = false;                           // == parsed.has_value()
    double latency_s = 0.0;
    std::optional<FailureKind> failure;
};

struct ParseOutcome {
    std::optional<std::vector<std::string>> names;
    std::string error;  // set when names is absent
};

// Extraction: last complete fenced code block if any, else the whole text;
// then the first well-formed array-of-strings literal; every element must be
// an exact catalog name. Duplicates are dropped, first occurrence kept.
// Failures are values, not exceptions.
ParseOutcome parse_output(std::string_view raw, std::span<const RuleDescriptor> catalog);

// Template index for (seed, instance, repetition); uniform over 1..5 and
// independent of execution order.
int assign_template(std::uint64_t seed, std::string_view instance_id, int repetition);

struct RunEvalOptions {
    int k = 5;
    std::uint64_t seed = 0;
    Phrasing phrasing = Phrasing::natural;
    int max_parallel = 4;
    // When set, completed records are appended here as they finish and
    // pre-existing (instance, repetition) pairs are skipped on startup, which
    // makes interrupted runs resumable.
    std::string journal_path;
};

// instance x repetition sweep against one endpoint. Per-request failures are
// recorded, not fatal. Records are returned sorted by (dataset order,
// repetition) regardless of completion order.
std::vector<EvalRecord> run_eval(const std::vector<DatasetInstance>& dataset,
                                 Endpoint& endpoint, const RunEvalOptions& options);

std::string record_to_line(const EvalRecord& record);
EvalRecord record_from_line(std::string_view line);
std::vector<EvalRecord> read_records_file(const std::string& path);

}  // namespace chartlint
