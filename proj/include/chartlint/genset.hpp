#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "chartlint/data_table.hpp"
#include "chartlint/rng.hpp"
#include "chartlint/rules.hpp"

namespace chartlint {

// Sampling probabilities for the random spec generator. The values steer the
// sampler toward configurations that violate rules; they are knobs, not
// constants, and every run echoes them for provenance.
struct SamplerParams {
    double p_illegal_scale = 0.25;  // pick a scale outside the field kind's legal set
    double p_bin = 0.15;
    double p_aggregate = 0.2;
    double p_stack = 0.2;  // per positional encoding, at most one wins
    double p_polar = 0.05;

    bool operator==(const SamplerParams&) const = default;
};

enum class AcceptBranch { bootstrap, deterministic, probabilistic };

struct AcceptEvent {
    std::size_t candidate_index;
    double kl_old;
    double kl_new;
    bool accepted;
    AcceptBranch branch;
};

struct GenConfig {
    std::size_t target_size = 2000;
    double epsilon = 1e-3;
    double temperature = 1e-4;
    std::uint64_t seed = 0;
    std::vector<DataTable> tables;
    std::size_t max_candidates = 0;  // 0 means target_size * 1000
    bool filter = true;
    // The empty histogram is exactly uniform under smoothing, so the filter
    // would reject every first candidate; the first `bootstrap_window`
    // acceptances bypass it.
    std::size_t bootstrap_window = 25;
    SamplerParams sampler;
    std::size_t inline_rows = 50;  // rows embedded in each emitted document

    // Test hook; called for every candidate with a non-empty violation set.
    std::function<void(const AcceptEvent&)> observer;
};

struct DatasetInstance {
    std::string id;
    ChartSpec spec;
    std::string table_ref;
    ViolationSet violations;
    std::string emitted_doc;
    std::uint64_t seed = 0;             // RNG provenance: root seed ...
    std::uint64_t candidate_index = 0;  // ... and candidate ordinal
};

struct ProblemHistogram {
    std::map<std::string, std::uint64_t> counts;  // keys are catalog rule names

    void add(const ViolationSet& v);
};

struct GenResult {
    std::vector<DatasetInstance> instances;
    ProblemHistogram histogram;
    std::vector<double> kl_trace;  // divergence after each acceptance
    std::size_t candidates_examined = 0;
};

// One random validating spec over the table's columns.
ChartSpec sample_spec(Rng& rng, const DataTable& table, const SamplerParams& params);

// KL divergence of `counts` (plus `alpha` pseudo-counts per entry) from the
// uniform distribution over the same support. Natural log. Throws
// EmptyHistogram when the support is empty.
double kl_to_uniform(std::span<const std::uint64_t> counts, double alpha);

// Catalog-wide histogram form, alpha = 1.
double kl_to_uniform(const ProblemHistogram& hist);

// Acceptance rule: deterministic when the divergence drops by at least
// epsilon, otherwise one uniform draw against min(1, exp(delta/temperature)).
bool accept_candidate(double kl_old, double kl_new, double epsilon, double temperature,
                      Rng& rng);

GenResult generate_dataset(const GenConfig& config);

// Dataset file I/O: one structured record per line, plus a companion manifest
// carrying histogram, divergence trace and the resolved config.
std::string dataset_record_line(const DatasetInstance& inst, const GenConfig& config);
std::vector<DatasetInstance> read_dataset(std::string_view jsonl);
void write_dataset(const std::string& path, const GenResult& result, const GenConfig& config);
std::vector<DatasetInstance> read_dataset_file(const std::string& path);

std::string manifest_json(const GenResult& result, const GenConfig& config);

}  // namespace chartlint
