#include "chartlint/rules.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "chartlint/errors.hpp"

namespace chartlint {

std::string_view to_string(RuleCategory c) {
    switch (c) {
        case RuleCategory::encoding: return "encoding";
        case RuleCategory::mark: return "mark";
        case RuleCategory::stack: return "stack";
        case RuleCategory::scale: return "scale";
        case RuleCategory::data: return "data";
    }
    return "?";
}

namespace {

struct RuleDef {
    const char* name;
    RuleCategory category;
    const char* description;
};

static const RuleDef kRuleDefs[] = {
    {"size_negative", RuleCategory::encoding,
     R"rule(A violation occurs if a channel is encoded with size and the corresponding field contains both negative and positive values. The size encoding implies positive magnitude, so it should not be used when the data includes negative values.)rule"},
    {"line_area_with_discrete", RuleCategory::mark,
     R"rule(A violation occurs when a line or area chart is used and both the x and y channels are encoded with discrete scales. Line and area marks are intended for continuous data and do not function correctly with fully discrete axes.)rule"},
    {"bar_tick_continuous_x_y", RuleCategory::mark,
     R"rule(A violation occurs if a bar or tick chart is used and both the x and y channels are continuous. These mark types are designed to compare discrete categories and are not suitable for continuous continuous configurations.)rule"},
    {"shape_without_point", RuleCategory::encoding,
     R"rule(A violation occurs when the shape channel is used but the mark type is not point. The shape encoding is only meaningful when applied to point marks.)rule"},
    {"size_without_point_text", RuleCategory::encoding,
     R"rule(A violation occurs if the size channel is used with a mark type that is neither point nor text. Only point and text marks properly support the size encoding.)rule"},
    {"area_bar_with_log", RuleCategory::mark,
     R"rule(A violation occurs when a bar or area chart uses a logarithmic scale on either the x or y axis. Using log scales with these mark types can produce misleading visuals and should be avoided.)rule"},
    {"rect_without_d_d", RuleCategory::encoding,
     R"rule(A violation occurs if a rect mark is used and either the x or y channel is continuous. Rect marks require both axes to be discrete to represent a meaningful tiled layout.)rule"},
    {"same_field_x_and_y", RuleCategory::encoding,
     R"rule(A violation occurs when the same field is assigned to both the x and y channels of a single mark. This redundancy creates a chart that is either meaningless or visually confusing.)rule"},
    {"bar_tick_area_line_without_continuous_x_y", RuleCategory::mark,
     R"rule(A violation occurs when a chart uses a bar, tick, area, or line mark but neither the x nor y channel is continuous. These marks depend on at least one continuous axis to effectively display measurements or trends.)rule"},
    {"no_stack_with_bar_area_discrete_color", RuleCategory::stack,
     R"rule(A violation occurs when a bar or area chart uses a discrete or binned color channel but does not use stacking. Stacking is required to accurately represent grouped values in this context.)rule"},
    {"stack_without_discrete_color_or_detail", RuleCategory::stack,
     R"rule(A violation occurs when stacking is enabled on a mark, but neither a discrete/binned color channel nor a detail channel is used. Stacking requires at least one of these to define how data should be grouped.)rule"},
    {"stack_discrete", RuleCategory::stack,
     R"rule(A violation occurs when stacking is applied to a channel that is discrete or binned. Stacking must only be applied to continuous channels to ensure correct rendering of data aggregation.)rule"},
    {"same_field", RuleCategory::encoding,
     R"rule(Triggers when the same field is used exactly twice as an encoding for the same mark. This indicates a preference to avoid duplicating the same data field in multiple channels for a single mark.)rule"},
    {"same_field_grt3", RuleCategory::encoding,
     R"rule(Triggers when the same field is used three or more times as an encoding for the same mark. This indicates a stronger penalty for repeatedly using the same field excessively.)rule"},
    {"number_categorical", RuleCategory::encoding,
     R"rule(Triggers when a field of type `number` is encoded with a categorical scale type. This reflects a preference against treating numeric data as categorical.)rule"},
    {"only_discrete", RuleCategory::encoding,
     R"rule(Triggers when a mark has no continuous encodings all its channels are discrete or binned.)rule"},
    {"multi_non_pos", RuleCategory::encoding,
     R"rule(Triggers when a single mark uses more than one non-positional channel (e.g., color, size, shape).)rule"},
    {"non_pos_used_before_pos", RuleCategory::encoding,
     R"rule(Triggers when a non-positional channel is used in a mark but neither `x` nor `y` positional channels are present.)rule"},
    {"only_y", RuleCategory::encoding,
     R"rule(Triggers when a mark has an encoding for `y` but no encoding for `x`.)rule"},
    {"high_cardinality_ordinal", RuleCategory::data,
     R"rule(Triggers when a field encoded with an ordinal scale has cardinality greater than 30.)rule"},
    {"high_cardinality_categorical_grt10", RuleCategory::data,
     R"rule(Triggers when a field encoded with a categorical scale has cardinality greater than 10.)rule"},
    {"high_cardinality_shape", RuleCategory::data,
     R"rule(Triggers when the shape channel is encoded with a field having cardinality greater than 8.)rule"},
    {"high_cardinality_size", RuleCategory::data,
     R"rule(Triggers when the size channel is present, and the `x` or `y` positional encoding is continuous and has cardinality greater than 100.)rule"},
    {"horizontal_scrolling_x", RuleCategory::data,
     R"rule(Triggers when the x-channel is discrete or binned and has cardinality greater than 50.)rule"},
    {"log_scale", RuleCategory::scale,
     R"rule(Triggers when an encoding uses a log scale type.)rule"},
    {"ordinal_scale", RuleCategory::scale,
     R"rule(Triggers when an encoding uses an ordinal scale type.)rule"},
    {"categorical_scale", RuleCategory::scale,
     R"rule(Triggers when an encoding uses a categorical scale type.)rule"},
    {"c_c_line", RuleCategory::mark,
     R"rule(Triggers when both x and y are continuous and the mark type is `line`.)rule"},
    {"c_c_area", RuleCategory::mark,
     R"rule(Triggers when both x and y are continuous and the mark type is `area`.)rule"},
    {"c_d_overlap_point", RuleCategory::mark,
     R"rule(Triggers when the x/y relationship is continuous by discrete, overlap is detected, and the mark type is `point`.)rule"},
    {"c_d_overlap_bar", RuleCategory::mark,
     R"rule(Triggers when the x/y relationship is continuous by discrete, overlap is detected, and the mark type is `bar`.)rule"},
    {"c_d_overlap_line", RuleCategory::mark,
     R"rule(Triggers when the x/y relationship is continuous by discrete, overlap is detected, and the mark type is `line`.)rule"},
    {"c_d_overlap_area", RuleCategory::mark,
     R"rule(Triggers when the x/y relationship is continuous by discrete, overlap is detected, and the mark type is `area`.)rule"},
    {"c_d_no_overlap_point", RuleCategory::mark,
     R"rule(Triggers when the x/y relationship is continuous by discrete, no overlap is detected, and the mark type is `point`.)rule"},
    {"c_d_no_overlap_line", RuleCategory::mark,
     R"rule(Triggers when the x/y relationship is continuous by discrete, no overlap is detected, and the mark type is `line`.)rule"},
    {"c_d_no_overlap_area", RuleCategory::mark,
     R"rule(Triggers when the x/y relationship is continuous by discrete, no overlap is detected, and the mark type is `area`.)rule"},
    {"linear_color", RuleCategory::scale,
     R"rule(Triggers when the color channel is used with a linear scale type.)rule"},
    {"linear_size", RuleCategory::scale,
     R"rule(Triggers when the size channel is used with a linear scale type.)rule"},
    {"log_color", RuleCategory::scale,
     R"rule(Triggers when the color channel is used with a log scale type.)rule"},
    {"log_size", RuleCategory::scale,
     R"rule(Triggers when the size channel is used with a log scale type.)rule"},
    {"ordinal_x", RuleCategory::scale,
     R"rule(Triggers when the x-channel is used with an ordinal scale type.)rule"},
    {"ordinal_color", RuleCategory::scale,
     R"rule(Triggers when the color channel is used with an ordinal scale type.)rule"},
    {"ordinal_size", RuleCategory::scale,
     R"rule(Triggers when the size channel is used with an ordinal scale type.)rule"},
    {"ordinal_shape", RuleCategory::scale,
     R"rule(Triggers when the shape channel is used with an ordinal scale type.)rule"},
    {"categorical_color", RuleCategory::scale,
     R"rule(Triggers when the color channel is used with a categorical scale type.)rule"},
    {"polar_coordinate", RuleCategory::data,
     R"rule(Triggers when the view coordinates are set to `polar`.)rule"},
    {"c_c_point", RuleCategory::mark,
     R"rule(Triggers when both x and y are continuous and the mark type is `point`.)rule"},
    {"c_d_overlap_tick", RuleCategory::mark,
     R"rule(Triggers when the x/y relationship is continuous by discrete, overlap is detected, and the mark type is `tick`.)rule"},
    {"c_d_no_overlap_bar", RuleCategory::mark,
     R"rule(Triggers when the x/y relationship is continuous by discrete, no overlap is detected, and the mark type is `bar`.)rule"},
    {"d_d_point", RuleCategory::mark,
     R"rule(Triggers when both x and y are discrete and the mark type is `point`.)rule"},
    {"d_d_rect", RuleCategory::mark,
     R"rule(Triggers when both x and y are discrete and the mark type is `rect`.)rule"},
    {"log_x", RuleCategory::scale,
     R"rule(Triggers when the x-channel uses a log scale type.)rule"},
    {"log_y", RuleCategory::scale,
     R"rule(Triggers when the y-channel uses a log scale type.)rule"},
    {"ordinal_y", RuleCategory::scale,
     R"rule(Triggers when the y-channel uses an ordinal scale type.)rule"},
};

}  // namespace

std::span<const RuleDescriptor> rule_catalog() {
    static const std::vector<RuleDescriptor> catalog = [] {
        std::vector<RuleDescriptor> rules;
        rules.reserve(std::size(kRuleDefs));
        for (const auto& def : kRuleDefs) {
            rules.push_back({def.name, def.category, def.description, ""});
        }
        return rules;
    }();
    return catalog;
}

namespace {

const std::unordered_map<std::string_view, std::size_t>& catalog_lookup() {
    static const std::unordered_map<std::string_view, std::size_t> index = [] {
        std::unordered_map<std::string_view, std::size_t> m;
        const auto catalog = rule_catalog();
        for (std::size_t i = 0; i < catalog.size(); ++i) m.emplace(catalog[i].name, i);
        return m;
    }();
    return index;
}

// Cardinality thresholds, one per data rule ("greater than N": fires at N+1).
constexpr std::size_t kOrdinalCardinality = 30;
constexpr std::size_t kCategoricalCardinality = 10;
constexpr std::size_t kShapeCardinality = 8;
constexpr std::size_t kSizeAxisCardinality = 100;
constexpr std::size_t kScrollingCardinality = 50;

// Shared derived facts for one (spec, table) pair. Channel lookups, field
// profiles and the overlap decision are computed at most once and reused by
// every predicate.
struct LintFacts {
    const ChartSpec& spec;
    const DataTable& table;
    const TableProfiles& profiles;

    const Encoding* channel[7] = {};
    const Encoding* stacked_enc = nullptr;
    int non_positional = 0;
    std::map<std::string, int> field_uses;

    bool x_present = false, y_present = false;
    bool x_cont = false, y_cont = false;  // present and continuous
    bool x_disc = false, y_disc = false;  // present and discrete
    bool cd_config = false;               // exactly one continuous positional

    mutable std::optional<bool> overlap_cache;

    LintFacts(const ChartSpec& s, const DataTable& t, const TableProfiles& p)
        : spec(s), table(t), profiles(p) {
        for (const auto& e : spec.encodings) {
            channel[static_cast<int>(e.channel)] = &e;
            if (!is_positional(e.channel)) ++non_positional;
            if (e.stacked) stacked_enc = &e;
            if (e.field) ++field_uses[*e.field];
        }
        const Encoding* x = enc(Channel::x);
        const Encoding* y = enc(Channel::y);
        x_present = x != nullptr;
        y_present = y != nullptr;
        x_cont = x && is_continuous(*x);
        y_cont = y && is_continuous(*y);
        x_disc = x && is_discrete(*x);
        y_disc = y && is_discrete(*y);
        cd_config = x_present && y_present && (x_cont != y_cont);
    }

    const Encoding* enc(Channel c) const { return channel[static_cast<int>(c)]; }

    bool scale_used(ScaleType s) const {
        return std::any_of(spec.encodings.begin(), spec.encodings.end(),
                           [s](const Encoding& e) { return e.scale == s; });
    }

    bool channel_scale(Channel c, ScaleType s) const {
        const Encoding* e = enc(c);
        return e && e->scale == s;
    }

    const FieldProfile* profile(const Encoding* e) const {
        if (!e || !e->field) return nullptr;
        return &profiles.at(*e->field);
    }

    // Lazy: c/d configurations with rect or text marks never need it.
    bool overlap() const {
        if (!overlap_cache) overlap_cache = detect_overlap(spec, table);
        return *overlap_cache;
    }

    bool cardinality_over(const Encoding* e, std::size_t threshold) const {
        const FieldProfile* p = profile(e);
        return p && p->cardinality > threshold;
    }
};

void evaluate_all(const LintFacts& f, ViolationSet& out) {
    const MarkType mark = f.spec.mark;
    const Encoding* x = f.enc(Channel::x);
    const Encoding* y = f.enc(Channel::y);
    const Encoding* color = f.enc(Channel::color);
    const Encoding* size = f.enc(Channel::size);
    const Encoding* shape = f.enc(Channel::shape);
    const Encoding* detail = f.enc(Channel::detail);

    auto add = [&out](std::string_view name) { out.names.emplace(name); };

    // --- encoding ---
    if (const FieldProfile* p = f.profile(size);
        p && p->kind == FieldKind::number && p->has_negative && p->has_positive) {
        add("size_negative");
    }
    if (shape && mark != MarkType::point) add("shape_without_point");
    if (size && mark != MarkType::point && mark != MarkType::text) {
        add("size_without_point_text");
    }
    if (x && y && x->field && y->field && *x->field == *y->field) add("same_field_x_and_y");
    for (const auto& [field, uses] : f.field_uses) {
        if (uses == 2) add("same_field");
        if (uses >= 3) add("same_field_grt3");
    }
    if (mark == MarkType::rect && (f.x_cont || f.y_cont)) add("rect_without_d_d");
    for (const auto& e : f.spec.encodings) {
        const FieldProfile* p = f.profile(&e);
        if (e.scale == ScaleType::categorical && p && p->kind == FieldKind::number) {
            add("number_categorical");
            break;
        }
    }
    if (std::none_of(f.spec.encodings.begin(), f.spec.encodings.end(),
                     [](const Encoding& e) { return is_continuous(e); })) {
        add("only_discrete");
    }
    if (f.y_present && !f.x_present) add("only_y");
    if (f.non_positional > 1) add("multi_non_pos");
    if (f.non_positional > 0 && !f.x_present && !f.y_present) add("non_pos_used_before_pos");

    // --- mark ---
    if ((mark == MarkType::line || mark == MarkType::area) && f.x_disc && f.y_disc) {
        add("line_area_with_discrete");
    }
    if ((mark == MarkType::bar || mark == MarkType::tick) && f.x_cont && f.y_cont) {
        add("bar_tick_continuous_x_y");
    }
    if ((mark == MarkType::bar || mark == MarkType::tick || mark == MarkType::area ||
         mark == MarkType::line) &&
        !f.x_cont && !f.y_cont) {
        add("bar_tick_area_line_without_continuous_x_y");
    }
    if ((mark == MarkType::bar || mark == MarkType::area) &&
        (f.channel_scale(Channel::x, ScaleType::log) ||
         f.channel_scale(Channel::y, ScaleType::log))) {
        add("area_bar_with_log");
    }
    if (f.x_cont && f.y_cont) {
        if (mark == MarkType::point) add("c_c_point");
        if (mark == MarkType::line) add("c_c_line");
        if (mark == MarkType::area) add("c_c_area");
    }
    if (f.x_disc && f.y_disc) {
        if (mark == MarkType::point) add("d_d_point");
        if (mark == MarkType::rect) add("d_d_rect");
    }
    if (f.cd_config) {
        switch (mark) {
            case MarkType::point:
                add(f.overlap() ? "c_d_overlap_point" : "c_d_no_overlap_point");
                break;
            case MarkType::bar:
                add(f.overlap() ? "c_d_overlap_bar" : "c_d_no_overlap_bar");
                break;
            case MarkType::line:
                add(f.overlap() ? "c_d_overlap_line" : "c_d_no_overlap_line");
                break;
            case MarkType::area:
                add(f.overlap() ? "c_d_overlap_area" : "c_d_no_overlap_area");
                break;
            case MarkType::tick:
                if (f.overlap()) add("c_d_overlap_tick");
                break;
            default:
                break;  // no c/d rule names rect or text
        }
    }

    // --- stack ---
    if ((mark == MarkType::bar || mark == MarkType::area) && color && is_discrete(*color) &&
        !f.stacked_enc) {
        add("no_stack_with_bar_area_discrete_color");
    }
    if (f.stacked_enc && !(color && is_discrete(*color)) && !detail) {
        add("stack_without_discrete_color_or_detail");
    }
    if (f.stacked_enc && is_discrete(*f.stacked_enc)) add("stack_discrete");

    // --- scale ---
    if (f.scale_used(ScaleType::log)) add("log_scale");
    if (f.scale_used(ScaleType::ordinal)) add("ordinal_scale");
    if (f.scale_used(ScaleType::categorical)) add("categorical_scale");
    if (f.channel_scale(Channel::x, ScaleType::log)) add("log_x");
    if (f.channel_scale(Channel::y, ScaleType::log)) add("log_y");
    if (f.channel_scale(Channel::x, ScaleType::ordinal)) add("ordinal_x");
    if (f.channel_scale(Channel::y, ScaleType::ordinal)) add("ordinal_y");
    if (f.channel_scale(Channel::color, ScaleType::linear)) add("linear_color");
    if (f.channel_scale(Channel::size, ScaleType::linear)) add("linear_size");
    if (f.channel_scale(Channel::color, ScaleType::log)) add("log_color");
    if (f.channel_scale(Channel::size, ScaleType::log)) add("log_size");
    if (f.channel_scale(Channel::color, ScaleType::ordinal)) add("ordinal_color");
    if (f.channel_scale(Channel::size, ScaleType::ordinal)) add("ordinal_size");
    if (f.channel_scale(Channel::shape, ScaleType::ordinal)) add("ordinal_shape");
    if (f.channel_scale(Channel::color, ScaleType::categorical)) add("categorical_color");

    // --- data ---
    for (const auto& e : f.spec.encodings) {
        if (e.scale == ScaleType::ordinal && f.cardinality_over(&e, kOrdinalCardinality)) {
            add("high_cardinality_ordinal");
            break;
        }
    }
    for (const auto& e : f.spec.encodings) {
        if (e.scale == ScaleType::categorical &&
            f.cardinality_over(&e, kCategoricalCardinality)) {
            add("high_cardinality_categorical_grt10");
            break;
        }
    }
    if (f.cardinality_over(shape, kShapeCardinality)) add("high_cardinality_shape");
    if (size && ((f.x_cont && f.cardinality_over(x, kSizeAxisCardinality)) ||
                 (f.y_cont && f.cardinality_over(y, kSizeAxisCardinality)))) {
        add("high_cardinality_size");
    }
    if (f.x_disc && f.cardinality_over(x, kScrollingCardinality)) add("horizontal_scrolling_x");
    if (f.spec.coordinates == Coordinates::polar) add("polar_coordinate");
}

}  // namespace

std::size_t catalog_index(std::string_view rule) {
    const auto& lookup = catalog_lookup();
    auto it = lookup.find(rule);
    if (it == lookup.end()) throw UnknownRule("unknown rule '" + std::string(rule) + "'");
    return it->second;
}

bool is_catalog_rule(std::string_view rule) {
    return catalog_lookup().find(rule) != catalog_lookup().end();
}

ViolationSet lint(const ChartSpec& spec, const DataTable& table, const TableProfiles& profiles) {
    // Any dangling field reference is an error regardless of which rules
    // would consult it.
    for (const auto& e : spec.encodings) {
        if (e.field) profiles.at(*e.field);
    }

    LintFacts facts(spec, table, profiles);
    ViolationSet out;
    evaluate_all(facts, out);
    return out;
}

ViolationSet lint(const ChartSpec& spec, const DataTable& table) {
    return lint(spec, table, profile_table(table));
}

}  // namespace chartlint
