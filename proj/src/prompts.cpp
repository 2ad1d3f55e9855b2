#include "chartlint/prompts.hpp"

#include <array>

#include "chartlint/errors.hpp"

namespace chartlint {

namespace {

static const char kTemplate1[] = R"tpl(You are an expert in data visualization design using Vega-Lite.

## Input

### Problems:
{problems}

### Vega-Lite specification:
{vega-spec}

## Task
Analyze the Vega-Lite specification and identify which **exact** problem name from the list above are present.

## Output Requirements
- Output **only** a valid JSON array of strings.
- Each string must be an **exact match** to a problem name from the provided list (excluding the "name :" prefix).
- Do **not** add explanations, reasoning, or any extra text.
- If no problems match, return an empty JSON array: []

### Example:
["problem_A", "problem_B"])tpl";

static const char kTemplate2[] = R"tpl(### Problems:
{problems}

You are a Vega-Lite visualization evaluator. Your goal is to read the given Vega-Lite specification and identify any problems from the above list that it exhibits. Focus only on exact matches from the provided names.

### Vega-Lite specification:
{vega-spec}

## Output Requirements
- Output **only** a JSON array of strings.
- Strings must exactly match a problem name from the list (omit "name :").
- No explanations, commentary, or extra formatting.
- If no problems are present, return []

### Example:
["problem_A", "problem_B"]
""")tpl";

static const char kTemplate3[] = R"tpl(### Problems:
{problems}

Analyze the following Vega-Lite specification carefully. Report which of the problem names listed above are present in it. Only use exact matches.

### Vega-Lite specification:
{vega-spec}

## Output Requirements
- Return **only** a JSON array of strings.
- Each string must match a problem name exactly (exclude "name :").
- Do not include explanations, notes, or any additional text.
- Return [] if there are no matches.

### Example:
["problem_A", "problem_B"]
""")tpl";

static const char kTemplate4[] = R"tpl(### Problems:
{problems}

You are tasked with checking the Vega-Lite specification below. Identify all problems from the above list that appear in it. Ensure each match is exact.

### Vega-Lite specification:
{vega-spec}

## Output Requirements
- Provide **only** a JSON array of strings.
- Each string must be an exact problem name (without "name :").
- No extra text, reasoning, or commentary.
- If no problems are found, return []

### Example:
["problem_A", "problem_B"]
""")tpl";

static const char kTemplate5[] = R"tpl(### Problems:
{problems}

Review the Vega-Lite specification and determine which problem names from the list are present. Only include exact matches in your output.

### Vega-Lite specification:
{vega-spec}

## Output Requirements
- Output **only** a JSON array of strings.
- Strings must exactly match the problem names (ignore the "name :" prefix).
- Do not provide explanations, notes, or any additional text.
- If none match, return []

### Example:
["problem_A", "problem_B"]
""")tpl";


// Replaces the single occurrence of `placeholder`; throws when it is absent.
std::string replace_placeholder(std::string text, std::string_view placeholder,
                                std::string_view value) {
    const std::size_t pos = text.find(placeholder);
    if (pos == std::string::npos) {
        throw MissingPlaceholder("template is missing '" + std::string(placeholder) + "'");
    }
    text.replace(pos, placeholder.size(), value);
    return text;
}

}  // namespace

std::span<const PromptTemplate> prompt_templates() {
    static const std::vector<PromptTemplate> templates = {
        {1, kTemplate1}, {2, kTemplate2}, {3, kTemplate3}, {4, kTemplate4}, {5, kTemplate5},
    };
    return templates;
}

std::string render_problem_list(std::span<const RuleDescriptor> catalog, Phrasing phrasing,
                                std::vector<std::string>* warnings) {
    std::string out;
    bool first = true;
    for (const auto& rule : catalog) {
        if (!first) out += "\n\n";
        first = false;
        out += "name: ";
        out += rule.name;
        out += '\n';
        if (phrasing == Phrasing::formal && rule.description_asp.empty()) {
            if (warnings) {
                warnings->push_back("rule '" + rule.name +
                                    "' has no formal phrasing, using the natural one");
            }
            out += rule.description_nl;
        } else if (phrasing == Phrasing::formal) {
            out += rule.description_asp;
        } else {
            out += rule.description_nl;
        }
    }
    return out;
}

std::string build_prompt(const PromptTemplate& tpl, std::span<const RuleDescriptor> catalog,
                         const DatasetInstance& instance, const DataTable* table,
                         Phrasing phrasing, std::vector<std::string>* warnings) {
    const std::string problems = render_problem_list(catalog, phrasing, warnings);
    const std::string doc =
        table ? emit_spec_with_data(instance.spec, *table, 50) : instance.emitted_doc;
    std::string out = replace_placeholder(tpl.body, "{problems}", problems);
    return replace_placeholder(std::move(out), "{vega-spec}", doc);
}

}  // namespace chartlint
