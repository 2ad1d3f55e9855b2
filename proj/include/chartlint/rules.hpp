#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chartlint/chart_spec.hpp"
#include "chartlint/data_table.hpp"

namespace chartlint {

enum class RuleCategory { encoding, mark, stack, scale, data };

std::string_view to_string(RuleCategory c);

struct RuleDescriptor {
    std::string name;
    RuleCategory category;
    std::string description_nl;      // human-readable rule text, shown in prompts
    std::string description_asp;     // alternate formal phrasing; empty when none exists
};

struct ViolationSet {
    std::set<std::string, std::less<>> names;

    bool contains(std::string_view rule) const { return names.find(rule) != names.end(); }
    bool operator==(const ViolationSet&) const = default;
};

// The 54 rules in catalog order. Built once, immutable afterwards.
std::span<const RuleDescriptor> rule_catalog();

// Index of a rule name within the catalog. Throws UnknownRule.
std::size_t catalog_index(std::string_view rule);

bool is_catalog_rule(std::string_view rule);

// Evaluates every rule against (spec, table). Field statistics are taken from
// `profiles`; the two-argument form computes them on the fly.
ViolationSet lint(const ChartSpec& spec, const DataTable& table);
ViolationSet lint(const ChartSpec& spec, const DataTable& table, const TableProfiles& profiles);

// Human-readable account of why `rule` does or does not fire for (spec, table).
std::string explain(const ChartSpec& spec, const DataTable& table, std::string_view rule);

}  // namespace chartlint
