#pragma once

#include <span>
#include <vector>

#include "chartlint/rules.hpp"

namespace chartlint {

struct LintItem {
    const ChartSpec* spec = nullptr;
    const DataTable* table = nullptr;
    const TableProfiles* profiles = nullptr;  // optional, computed when null
};

// Lints every item. Items are independent, so the parallel path splits them
// across OpenMP threads; the serial path is the reference for benchmarks and
// for builds without OpenMP.
std::vector<ViolationSet> lint_batch(std::span<const LintItem> items);
std::vector<ViolationSet> lint_batch_serial(std::span<const LintItem> items);

}  // namespace chartlint
