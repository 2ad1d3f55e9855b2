#pragma once

#include "chartlint/rules.hpp"

namespace chartlint::reference {

// Naive re-implementation of the rule set, written clause by clause from the
// rule descriptions with no shared derived state: every predicate rescans the
// encodings and recomputes statistics from raw rows. Serial only. Used to
// cross-check the engine and as the benchmark baseline.
ViolationSet lint_reference(const ChartSpec& spec, const DataTable& table);

}  // namespace chartlint::reference
