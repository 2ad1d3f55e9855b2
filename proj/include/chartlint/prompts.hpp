#pragma once

#include <span>
#include <string>
#include <vector>

#include "chartlint/genset.hpp"
#include "chartlint/rules.hpp"

namespace chartlint {

struct PromptTemplate {
    int index = 0;  // 1..5
    std::string body;
};

enum class Phrasing { natural, formal };

// The five instruction variants, verbatim. Each body contains {problems} and
// {vega-spec} exactly once.
std::span<const PromptTemplate> prompt_templates();

// The problem list as shown to models: "name: <id>\n<description>" blocks.
// `formal` falls back to the natural text for rules without a formal
// phrasing, recording one warning per affected rule in `warnings` (nullable).
std::string render_problem_list(std::span<const RuleDescriptor> catalog, Phrasing phrasing,
                                std::vector<std::string>* warnings);

// Fills both placeholders. When `table` is non-null the spec is re-emitted
// with the first min(50, row_count) rows inline; otherwise the instance's
// stored document is used as is. Throws MissingPlaceholder.
std::string build_prompt(const PromptTemplate& tpl, std::span<const RuleDescriptor> catalog,
                         const DatasetInstance& instance, const DataTable* table,
                         Phrasing phrasing, std::vector<std::string>* warnings);

}  // namespace chartlint
