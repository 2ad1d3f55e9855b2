#pragma once

#include <map>
#include <span>
#include <string>

#include "chartlint/eval.hpp"
#include "chartlint/rules.hpp"

namespace chartlint {

struct Metrics {
    // Mean and sample standard deviation of per-repetition F1, per rule.
    // Every catalog rule has an entry; rules with zero support carry 0 and
    // are excluded from the averages.
    std::map<std::string, double> per_problem_f1;
    std::map<std::string, double> per_problem_std;
    std::map<std::string, std::size_t> per_problem_support;
    std::map<std::string, double> per_category_avg;  // categories with support only
    double global_avg = 0.0;                         // unweighted mean over all supported rules
    double adherence = 0.0;                          // adherent / total records
    std::size_t records_total = 0;
    std::size_t records_adherent = 0;
};

// Scores records against ground truth. Non-adherent records count as empty
// prediction sets. Throws MissingGroundTruth when a record's instance has no
// entry in `truth`.
Metrics score(std::span<const EvalRecord> records,
              const std::map<std::string, ViolationSet>& truth,
              std::span<const RuleDescriptor> catalog);

// Text table: problems grouped by category with per-category and global
// averages, then the adherence line.
std::string render_report(const Metrics& metrics, std::span<const RuleDescriptor> catalog);

std::string metrics_to_json(const Metrics& metrics);

}  // namespace chartlint
