#pragma once

// One minimal (spec, table) pair per rule. Each case is constructed so the
// named rule fires and as little else as possible; where a co-fire is forced
// by the rule definitions themselves, the expected set lists it and the note
// says why. Expected sets were derived by hand-applying every rule
// description to the case.

#include <set>
#include <string>
#include <vector>

#include "test_support.hpp"

namespace chartlint::testing {

struct CuratedCase {
    std::string rule;                    // the rule under test
    ChartSpec spec;
    const DataTable* table;
    std::set<std::string, std::less<>> expected;  // full expected lint output
    std::string note;                    // why any co-fire is unavoidable
};

struct CuratedSuite {
    // base: a..d numeric distinct positive, m mixed sign, s distinct strings,
    // dup numbers with repeats
    DataTable base = load_table_csv("t",
                                    "a,b,c,d,m,s,dup\n"
                                    "1,10,2,3,-3,sa,7\n"
                                    "2,20,4,6,-1,sb,7\n"
                                    "3,30,6,9,2,sc,8\n"
                                    "4,40,8,12,4,sd,9\n"
                                    "5,50,9,15,5,se,9\n");
    DataTable t31 = distinct_strings_table(31);
    DataTable t11 = distinct_strings_table(11);
    DataTable t9 = distinct_strings_table(9);
    DataTable t101 = distinct_numbers_table(101);
    DataTable t51 = distinct_numbers_table(51);

    std::vector<CuratedCase> cases;

    CuratedSuite() { build(); }

  private:
    void add(std::string rule, ChartSpec spec, const DataTable& table,
             std::set<std::string, std::less<>> expected, std::string note = "") {
        cases.push_back({std::move(rule), std::move(spec), &table, std::move(expected),
                         std::move(note)});
    }

    void build() {
        constexpr Channel x = Channel::x, y = Channel::y, color = Channel::color,
                          shape = Channel::shape, detail = Channel::detail;
        constexpr ScaleType linear = ScaleType::linear, log = ScaleType::log,
                            ordinal = ScaleType::ordinal, categorical = ScaleType::categorical;
        constexpr MarkType point = MarkType::point, bar = MarkType::bar, line = MarkType::line,
                           area = MarkType::area, tick = MarkType::tick, rect = MarkType::rect;
        (void)linear;
        const auto& t = base;

        // --- encoding ---
        add("size_negative",
            make_spec(MarkType::text, {{x, "a"}, {y, "b"}, {Channel::size, "m"}}), t,
            {"size_negative", "linear_size"},
            "every size encoding carries a scale; linear is the quietest and fires linear_size");
        add("shape_without_point", make_spec(bar, {{x, "a"}, {shape, "s"}}), t,
            {"shape_without_point"});
        add("size_without_point_text", make_spec(bar, {{x, "a"}, {Channel::size, "b"}}), t,
            {"size_without_point_text", "linear_size"},
            "size scale forced, as for size_negative");
        add("same_field_x_and_y", make_spec(MarkType::text, {{x, "a"}, {y, "a"}}), t,
            {"same_field_x_and_y", "same_field"},
            "one field on both x and y is also a field used exactly twice");
        add("same_field",
            make_spec(MarkType::text, {{x, "a"}, {y, "b"}, {Channel::text, "a"}}), t,
            {"same_field"});
        add("same_field_grt3",
            make_spec(MarkType::text, {{x, "a"}, {y, "a"}, {Channel::text, "a"}}), t,
            {"same_field_grt3", "same_field_x_and_y"},
            "three uses over seven channels force either x+y sharing the field or two "
            "non-positional channels (multi_non_pos); the x/y route is smaller");
        add("rect_without_d_d", make_spec(rect, {{x, "a"}}), t, {"rect_without_d_d"});
        add("number_categorical",
            make_spec(MarkType::text, {{x, "a"}, {y, "b", categorical}}), t,
            {"number_categorical", "categorical_scale"},
            "any categorical encoding fires the generic categorical_scale rule");
        add("only_discrete", make_spec(MarkType::text, {{x, "a", linear, true}}), t,
            {"only_discrete"});
        add("only_y", make_spec(MarkType::text, {{y, "a"}}), t, {"only_y"});
        add("multi_non_pos",
            make_spec(MarkType::text,
                      {{x, "a"}, {y, "b"}, {Channel::text, "c"}, {detail, "d"}}),
            t, {"multi_non_pos"});
        add("non_pos_used_before_pos", make_spec(MarkType::text, {{Channel::text, "a"}}), t,
            {"non_pos_used_before_pos"});

        // --- mark ---
        add("line_area_with_discrete",
            make_spec(line, {{x, "a", linear, true}, {y, "b", linear, true}, {detail, "c"}}),
            t, {"line_area_with_discrete", "bar_tick_area_line_without_continuous_x_y"},
            "a line mark with both positional channels discrete necessarily has no "
            "continuous positional channel");
        add("bar_tick_continuous_x_y", make_spec(bar, {{x, "a"}, {y, "b"}}), t,
            {"bar_tick_continuous_x_y"});
        add("bar_tick_area_line_without_continuous_x_y",
            make_spec(bar, {{x, "a", linear, true}, {detail, "c"}}), t,
            {"bar_tick_area_line_without_continuous_x_y"});
        add("area_bar_with_log", make_spec(bar, {{x, "a", log}}), t,
            {"area_bar_with_log", "log_x", "log_scale"},
            "the log axis that defines this rule also fires log_x and log_scale");
        add("c_c_point", make_spec(point, {{x, "a"}, {y, "b"}}), t, {"c_c_point"});
        add("c_c_line", make_spec(line, {{x, "a"}, {y, "b"}}), t, {"c_c_line"});
        add("c_c_area", make_spec(area, {{x, "a"}, {y, "b"}}), t, {"c_c_area"});
        add("d_d_point",
            make_spec(point, {{x, "a", linear, true}, {y, "b", linear, true}, {detail, "c"}}),
            t, {"d_d_point"});
        add("d_d_rect",
            make_spec(rect, {{x, "a", linear, true}, {y, "b", linear, true}, {detail, "c"}}),
            t, {"d_d_rect"});
        for (auto [rule, mark] :
             std::initializer_list<std::pair<const char*, MarkType>>{
                 {"c_d_overlap_point", point},
                 {"c_d_overlap_bar", bar},
                 {"c_d_overlap_line", line},
                 {"c_d_overlap_area", area},
                 {"c_d_overlap_tick", tick}}) {
            add(rule, make_spec(mark, {{x, "dup", linear, true}, {y, "b"}}), t, {rule});
        }
        for (auto [rule, mark] :
             std::initializer_list<std::pair<const char*, MarkType>>{
                 {"c_d_no_overlap_point", point},
                 {"c_d_no_overlap_bar", bar},
                 {"c_d_no_overlap_line", line},
                 {"c_d_no_overlap_area", area}}) {
            add(rule, make_spec(mark, {{x, "a", linear, true}, {y, "b"}}), t, {rule});
        }

        // --- stack ---
        add("no_stack_with_bar_area_discrete_color",
            make_spec(bar, {{x, "a"}, {color, "c", linear, true}}), t,
            {"no_stack_with_bar_area_discrete_color", "linear_color"},
            "the discrete color channel needs a scale; binned linear is the only choice "
            "that avoids the ordinal/categorical scale rules but fires linear_color");
        add("stack_without_discrete_color_or_detail",
            make_spec(MarkType::text, {{x, "a"}, {y, "b", linear, false, {}, true}}), t,
            {"stack_without_discrete_color_or_detail"});
        add("stack_discrete",
            make_spec(MarkType::text,
                      {{x, "a"}, {y, "b", linear, true, {}, true}, {detail, "c"}}),
            t, {"stack_discrete"});

        // --- scale ---
        add("log_scale", make_spec(MarkType::text, {{x, "a"}, {Channel::text, "b", log}}), t,
            {"log_scale"});
        add("ordinal_scale",
            make_spec(MarkType::text, {{x, "a"}, {Channel::text, "s", ordinal}}), t,
            {"ordinal_scale"});
        add("categorical_scale",
            make_spec(MarkType::text, {{x, "a"}, {Channel::text, "s", categorical}}), t,
            {"categorical_scale"});
        add("log_x", make_spec(MarkType::text, {{x, "a", log}}), t, {"log_x", "log_scale"},
            "a log positional scale is also a log scale somewhere in the spec");
        add("log_y", make_spec(MarkType::text, {{x, "b"}, {y, "a", log}}), t,
            {"log_y", "log_scale"}, "as log_x");
        add("ordinal_x", make_spec(MarkType::text, {{x, "s", ordinal}, {y, "a"}}), t,
            {"ordinal_x", "ordinal_scale"}, "as log_x, for ordinal");
        add("ordinal_y", make_spec(MarkType::text, {{x, "a"}, {y, "s", ordinal}}), t,
            {"ordinal_y", "ordinal_scale"}, "as log_x, for ordinal");
        add("linear_color", make_spec(MarkType::text, {{x, "a"}, {color, "b"}}), t,
            {"linear_color"});
        add("linear_size", make_spec(MarkType::text, {{x, "a"}, {Channel::size, "b"}}), t,
            {"linear_size"});
        add("log_color", make_spec(MarkType::text, {{x, "a"}, {color, "b", log}}), t,
            {"log_color", "log_scale"}, "as log_x");
        add("log_size", make_spec(MarkType::text, {{x, "a"}, {Channel::size, "b", log}}), t,
            {"log_size", "log_scale"}, "as log_x");
        add("ordinal_color", make_spec(MarkType::text, {{x, "a"}, {color, "s", ordinal}}), t,
            {"ordinal_color", "ordinal_scale"}, "as log_x, for ordinal");
        add("ordinal_size",
            make_spec(MarkType::text, {{x, "a"}, {Channel::size, "b", ordinal}}), t,
            {"ordinal_size", "ordinal_scale"}, "as log_x, for ordinal");
        add("ordinal_shape", make_spec(point, {{x, "a"}, {shape, "s", ordinal}}), t,
            {"ordinal_shape", "ordinal_scale"}, "as log_x, for ordinal");
        add("categorical_color",
            make_spec(MarkType::text, {{x, "a"}, {color, "s", categorical}}), t,
            {"categorical_color", "categorical_scale"}, "as log_x, for categorical");

        // --- data ---
        add("high_cardinality_ordinal",
            make_spec(MarkType::text, {{x, "n"}, {Channel::text, "v", ordinal}}), t31,
            {"high_cardinality_ordinal", "ordinal_scale"},
            "the ordinal encoding the rule quantifies over fires ordinal_scale");
        add("high_cardinality_categorical_grt10",
            make_spec(MarkType::text, {{x, "n"}, {Channel::text, "v", categorical}}), t11,
            {"high_cardinality_categorical_grt10", "categorical_scale"},
            "as high_cardinality_ordinal, for categorical");
        add("high_cardinality_shape", make_spec(point, {{x, "n"}, {shape, "v"}}), t9,
            {"high_cardinality_shape"});
        add("high_cardinality_size",
            make_spec(MarkType::text, {{x, "big"}, {Channel::size, "n"}}), t101,
            {"high_cardinality_size", "linear_size"}, "size scale forced, as for size_negative");
        add("horizontal_scrolling_x",
            make_spec(MarkType::text, {{x, "big", linear, true}, {detail, "n"}}), t51,
            {"horizontal_scrolling_x"});
        add("polar_coordinate",
            make_spec(MarkType::text, {{x, "a"}, {y, "b"}}, Coordinates::polar), t,
            {"polar_coordinate"});
    }
};

}  // namespace chartlint::testing
