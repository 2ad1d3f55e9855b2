#include "chartlint/rules_reference.hpp"

#include <string>
#include <vector>

#include "chartlint/errors.hpp"

// Every predicate below restates one rule description literally and
// recomputes whatever it needs from the raw spec and rows. Nothing is shared
// or cached on purpose: this file exists to disagree with src/rules.cpp
// whenever one of the two misreads a rule.

namespace chartlint::reference {

namespace {

const Encoding* find_channel(const ChartSpec& spec, Channel c) {
    for (const auto& e : spec.encodings) {
        if (e.channel == c) return &e;
    }
    return nullptr;
}

bool encoding_is_continuous(const Encoding& e) {
    if (e.binned) return false;
    return e.scale == ScaleType::linear || e.scale == ScaleType::log;
}

bool encoding_is_discrete_or_binned(const Encoding& e) { return !encoding_is_continuous(e); }

std::size_t column_of(const DataTable& table, const std::string& field) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (table.columns[i] == field) return i;
    }
    throw UnknownColumn("column '" + field + "' not in table '" + table.name + "'");
}

// Distinct non-null values by linear search, no sets.
std::size_t naive_cardinality(const DataTable& table, const std::string& field) {
    const std::size_t col = column_of(table, field);
    std::vector<Cell> seen;
    for (const auto& row : table.rows) {
        const Cell& cell = row[col];
        if (is_null(cell)) continue;
        bool found = false;
        for (const auto& s : seen) {
            if (s == cell) {
                found = true;
                break;
            }
        }
        if (!found) seen.push_back(cell);
    }
    return seen.size();
}

bool field_is_number(const DataTable& table, const std::string& field) {
    const std::size_t col = column_of(table, field);
    for (const auto& row : table.rows) {
        const Cell& cell = row[col];
        if (is_null(cell)) continue;
        if (!std::holds_alternative<double>(cell)) return false;
    }
    return true;
}

bool field_has_negative_and_positive(const DataTable& table, const std::string& field) {
    const std::size_t col = column_of(table, field);
    bool negative = false;
    bool positive = false;
    for (const auto& row : table.rows) {
        const Cell& cell = row[col];
        if (const double* d = std::get_if<double>(&cell)) {
            if (*d < 0) negative = true;
            if (*d > 0) positive = true;
        }
    }
    return negative && positive;
}

// "continuous by discrete": x and y present, one continuous, one discrete.
bool continuous_by_discrete(const ChartSpec& spec) {
    const Encoding* x = find_channel(spec, Channel::x);
    const Encoding* y = find_channel(spec, Channel::y);
    if (!x || !y) return false;
    return encoding_is_continuous(*x) != encoding_is_continuous(*y);
}

// Pairwise re-derivation of the overlap decision: two rows collide when they
// occupy the same discrete-axis slot and, under aggregation, belong to
// different groups of the discrete non-positional channels.
bool naive_overlap(const ChartSpec& spec, const DataTable& table) {
    const Encoding* x = find_channel(spec, Channel::x);
    const Encoding* y = find_channel(spec, Channel::y);
    const Encoding* discrete_pos = encoding_is_continuous(*x) ? y : x;

    bool aggregated = false;
    for (const auto& e : spec.encodings) {
        if (e.aggregate) aggregated = true;
    }

    std::vector<std::size_t> group_cols;
    for (const auto& e : spec.encodings) {
        if (e.channel == Channel::x || e.channel == Channel::y) continue;
        if (encoding_is_discrete_or_binned(e) && e.field) {
            group_cols.push_back(column_of(table, *e.field));
        }
    }

    const bool has_slot_field = discrete_pos->field.has_value();
    std::size_t slot_col = 0;
    if (has_slot_field) slot_col = column_of(table, *discrete_pos->field);

    const auto& rows = table.rows;
    for (std::size_t a = 0; a < rows.size(); ++a) {
        if (has_slot_field && is_null(rows[a][slot_col])) continue;
        for (std::size_t b = a + 1; b < rows.size(); ++b) {
            if (has_slot_field && is_null(rows[b][slot_col])) continue;
            if (has_slot_field && !(rows[a][slot_col] == rows[b][slot_col])) continue;
            if (!aggregated) return true;  // two marks in one slot
            for (std::size_t col : group_cols) {
                if (!(rows[a][col] == rows[b][col])) return true;  // two groups in one slot
            }
        }
    }
    return false;
}

std::size_t times_field_used(const ChartSpec& spec, const std::string& field) {
    std::size_t n = 0;
    for (const auto& e : spec.encodings) {
        if (e.field && *e.field == field) ++n;
    }
    return n;
}

// --- one function per rule ---------------------------------------------

bool size_negative(const ChartSpec& spec, const DataTable& table) {
    const Encoding* size = find_channel(spec, Channel::size);
    if (!size || !size->field) return false;
    return field_has_negative_and_positive(table, *size->field);
}

bool line_area_with_discrete(const ChartSpec& spec, const DataTable&) {
    if (spec.mark != MarkType::line && spec.mark != MarkType::area) return false;
    const Encoding* x = find_channel(spec, Channel::x);
    const Encoding* y = find_channel(spec, Channel::y);
    return x && y && encoding_is_discrete_or_binned(*x) && encoding_is_discrete_or_binned(*y);
}

bool bar_tick_continuous_x_y(const ChartSpec& spec, const DataTable&) {
    if (spec.mark != MarkType::bar && spec.mark != MarkType::tick) return false;
    const Encoding* x = find_channel(spec, Channel::x);
    const Encoding* y = find_channel(spec, Channel::y);
    return x && y && encoding_is_continuous(*x) && encoding_is_continuous(*y);
}

bool shape_without_point(const ChartSpec& spec, const DataTable&) {
    return find_channel(spec, Channel::shape) != nullptr && spec.mark != MarkType::point;
}

bool size_without_point_text(const ChartSpec& spec, const DataTable&) {
    return find_channel(spec, Channel::size) != nullptr && spec.mark != MarkType::point &&
           spec.mark != MarkType::text;
}

bool area_bar_with_log(const ChartSpec& spec, const DataTable&) {
    if (spec.mark != MarkType::bar && spec.mark != MarkType::area) return false;
    const Encoding* x = find_channel(spec, Channel::x);
    const Encoding* y = find_channel(spec, Channel::y);
    return (x && x->scale == ScaleType::log) || (y && y->scale == ScaleType::log);
}

bool rect_without_d_d(const ChartSpec& spec, const DataTable&) {
    if (spec.mark != MarkType::rect) return false;
    const Encoding* x = find_channel(spec, Channel::x);
    const Encoding* y = find_channel(spec, Channel::y);
    return (x && encoding_is_continuous(*x)) || (y && encoding_is_continuous(*y));
}

bool same_field_x_and_y(const ChartSpec& spec, const DataTable&) {
    const Encoding* x = find_channel(spec, Channel::x);
    const Encoding* y = find_channel(spec, Channel::y);
    return x && y && x->field && y->field && *x->field == *y->field;
}

bool bar_tick_area_line_without_continuous_x_y(const ChartSpec& spec, const DataTable&) {
    if (spec.mark != MarkType::bar && spec.mark != MarkType::tick &&
        spec.mark != MarkType::area && spec.mark != MarkType::line) {
        return false;
    }
    const Encoding* x = find_channel(spec, Channel::x);
    const Encoding* y = find_channel(spec, Channel::y);
    const bool x_continuous = x && encoding_is_continuous(*x);
    const bool y_continuous = y && encoding_is_continuous(*y);
    return !x_continuous && !y_continuous;
}

bool no_stack_with_bar_area_discrete_color(const ChartSpec& spec, const DataTable&) {
    if (spec.mark != MarkType::bar && spec.mark != MarkType::area) return false;
    const Encoding* color = find_channel(spec, Channel::color);
    if (!color || !encoding_is_discrete_or_binned(*color)) return false;
    for (const auto& e : spec.encodings) {
        if (e.stacked) return false;
    }
    return true;
}

bool stack_without_discrete_color_or_detail(const ChartSpec& spec, const DataTable&) {
    bool stacking = false;
    for (const auto& e : spec.encodings) {
        if (e.stacked) stacking = true;
    }
    if (!stacking) return false;
    const Encoding* color = find_channel(spec, Channel::color);
    if (color && encoding_is_discrete_or_binned(*color)) return false;
    if (find_channel(spec, Channel::detail)) return false;
    return true;
}

bool stack_discrete(const ChartSpec& spec, const DataTable&) {
    for (const auto& e : spec.encodings) {
        if (e.stacked && encoding_is_discrete_or_binned(e)) return true;
    }
    return false;
}

bool same_field(const ChartSpec& spec, const DataTable&) {
    for (const auto& e : spec.encodings) {
        if (e.field && times_field_used(spec, *e.field) == 2) return true;
    }
    return false;
}

bool same_field_grt3(const ChartSpec& spec, const DataTable&) {
    for (const auto& e : spec.encodings) {
        if (e.field && times_field_used(spec, *e.field) >= 3) return true;
    }
    return false;
}

bool number_categorical(const ChartSpec& spec, const DataTable& table) {
    for (const auto& e : spec.encodings) {
        if (e.scale != ScaleType::categorical || !e.field) continue;
        if (field_is_number(table, *e.field)) return true;
    }
    return false;
}

bool only_discrete(const ChartSpec& spec, const DataTable&) {
    for (const auto& e : spec.encodings) {
        if (encoding_is_continuous(e)) return false;
    }
    return true;
}

bool multi_non_pos(const ChartSpec& spec, const DataTable&) {
    std::size_t n = 0;
    for (const auto& e : spec.encodings) {
        if (e.channel != Channel::x && e.channel != Channel::y) ++n;
    }
    return n > 1;
}

bool non_pos_used_before_pos(const ChartSpec& spec, const DataTable&) {
    bool any_non_positional = false;
    for (const auto& e : spec.encodings) {
        if (e.channel != Channel::x && e.channel != Channel::y) any_non_positional = true;
    }
    return any_non_positional && !find_channel(spec, Channel::x) &&
           !find_channel(spec, Channel::y);
}

bool only_y(const ChartSpec& spec, const DataTable&) {
    return find_channel(spec, Channel::y) && !find_channel(spec, Channel::x);
}

bool high_cardinality_ordinal(const ChartSpec& spec, const DataTable& table) {
    for (const auto& e : spec.encodings) {
        if (e.scale != ScaleType::ordinal || !e.field) continue;
        if (naive_cardinality(table, *e.field) > 30) return true;
    }
    return false;
}

bool high_cardinality_categorical_grt10(const ChartSpec& spec, const DataTable& table) {
    for (const auto& e : spec.encodings) {
        if (e.scale != ScaleType::categorical || !e.field) continue;
        if (naive_cardinality(table, *e.field) > 10) return true;
    }
    return false;
}

bool high_cardinality_shape(const ChartSpec& spec, const DataTable& table) {
    const Encoding* shape = find_channel(spec, Channel::shape);
    if (!shape || !shape->field) return false;
    return naive_cardinality(table, *shape->field) > 8;
}

bool high_cardinality_size(const ChartSpec& spec, const DataTable& table) {
    if (!find_channel(spec, Channel::size)) return false;
    for (Channel c : {Channel::x, Channel::y}) {
        const Encoding* e = find_channel(spec, c);
        if (!e || !encoding_is_continuous(*e) || !e->field) continue;
        if (naive_cardinality(table, *e->field) > 100) return true;
    }
    return false;
}

bool horizontal_scrolling_x(const ChartSpec& spec, const DataTable& table) {
    const Encoding* x = find_channel(spec, Channel::x);
    if (!x || !encoding_is_discrete_or_binned(*x) || !x->field) return false;
    return naive_cardinality(table, *x->field) > 50;
}

bool any_scale(const ChartSpec& spec, ScaleType s) {
    for (const auto& e : spec.encodings) {
        if (e.scale == s) return true;
    }
    return false;
}

bool channel_has_scale(const ChartSpec& spec, Channel c, ScaleType s) {
    const Encoding* e = find_channel(spec, c);
    return e && e->scale == s;
}

bool both_positional_continuous(const ChartSpec& spec) {
    const Encoding* x = find_channel(spec, Channel::x);
    const Encoding* y = find_channel(spec, Channel::y);
    return x && y && encoding_is_continuous(*x) && encoding_is_continuous(*y);
}

bool both_positional_discrete(const ChartSpec& spec) {
    const Encoding* x = find_channel(spec, Channel::x);
    const Encoding* y = find_channel(spec, Channel::y);
    return x && y && encoding_is_discrete_or_binned(*x) && encoding_is_discrete_or_binned(*y);
}

bool cd_with_overlap(const ChartSpec& spec, const DataTable& table, MarkType mark) {
    return spec.mark == mark && continuous_by_discrete(spec) && naive_overlap(spec, table);
}

bool cd_without_overlap(const ChartSpec& spec, const DataTable& table, MarkType mark) {
    return spec.mark == mark && continuous_by_discrete(spec) && !naive_overlap(spec, table);
}

bool polar_coordinate(const ChartSpec& spec, const DataTable&) {
    return spec.coordinates == Coordinates::polar;
}

}  // namespace

ViolationSet lint_reference(const ChartSpec& spec, const DataTable& table) {
    for (const auto& e : spec.encodings) {
        if (e.field) column_of(table, *e.field);
    }

    ViolationSet out;
    auto add = [&out](const char* name, bool fired) {
        if (fired) out.names.emplace(name);
    };

    add("size_negative", size_negative(spec, table));
    add("line_area_with_discrete", line_area_with_discrete(spec, table));
    add("bar_tick_continuous_x_y", bar_tick_continuous_x_y(spec, table));
    add("shape_without_point", shape_without_point(spec, table));
    add("size_without_point_text", size_without_point_text(spec, table));
    add("area_bar_with_log", area_bar_with_log(spec, table));
    add("rect_without_d_d", rect_without_d_d(spec, table));
    add("same_field_x_and_y", same_field_x_and_y(spec, table));
    add("bar_tick_area_line_without_continuous_x_y",
        bar_tick_area_line_without_continuous_x_y(spec, table));
    add("no_stack_with_bar_area_discrete_color",
        no_stack_with_bar_area_discrete_color(spec, table));
    add("stack_without_discrete_color_or_detail",
        stack_without_discrete_color_or_detail(spec, table));
    add("stack_discrete", stack_discrete(spec, table));
    add("same_field", same_field(spec, table));
    add("same_field_grt3", same_field_grt3(spec, table));
    add("number_categorical", number_categorical(spec, table));
    add("only_discrete", only_discrete(spec, table));
    add("multi_non_pos", multi_non_pos(spec, table));
    add("non_pos_used_before_pos", non_pos_used_before_pos(spec, table));
    add("only_y", only_y(spec, table));
    add("high_cardinality_ordinal", high_cardinality_ordinal(spec, table));
    add("high_cardinality_categorical_grt10", high_cardinality_categorical_grt10(spec, table));
    add("high_cardinality_shape", high_cardinality_shape(spec, table));
    add("high_cardinality_size", high_cardinality_size(spec, table));
    add("horizontal_scrolling_x", horizontal_scrolling_x(spec, table));
    add("log_scale", any_scale(spec, ScaleType::log));
    add("ordinal_scale", any_scale(spec, ScaleType::ordinal));
    add("categorical_scale", any_scale(spec, ScaleType::categorical));
    add("c_c_line", both_positional_continuous(spec) && spec.mark == MarkType::line);
    add("c_c_area", both_positional_continuous(spec) && spec.mark == MarkType::area);
    add("c_d_overlap_point", cd_with_overlap(spec, table, MarkType::point));
    add("c_d_overlap_bar", cd_with_overlap(spec, table, MarkType::bar));
    add("c_d_overlap_line", cd_with_overlap(spec, table, MarkType::line));
    add("c_d_overlap_area", cd_with_overlap(spec, table, MarkType::area));
    add("c_d_no_overlap_point", cd_without_overlap(spec, table, MarkType::point));
    add("c_d_no_overlap_line", cd_without_overlap(spec, table, MarkType::line));
    add("c_d_no_overlap_area", cd_without_overlap(spec, table, MarkType::area));
    add("linear_color", channel_has_scale(spec, Channel::color, ScaleType::linear));
    add("linear_size", channel_has_scale(spec, Channel::size, ScaleType::linear));
    add("log_color", channel_has_scale(spec, Channel::color, ScaleType::log));
    add("log_size", channel_has_scale(spec, Channel::size, ScaleType::log));
    add("ordinal_x", channel_has_scale(spec, Channel::x, ScaleType::ordinal));
    add("ordinal_color", channel_has_scale(spec, Channel::color, ScaleType::ordinal));
    add("ordinal_size", channel_has_scale(spec, Channel::size, ScaleType::ordinal));
    add("ordinal_shape", channel_has_scale(spec, Channel::shape, ScaleType::ordinal));
    add("categorical_color", channel_has_scale(spec, Channel::color, ScaleType::categorical));
    add("polar_coordinate", polar_coordinate(spec, table));
    add("c_c_point", both_positional_continuous(spec) && spec.mark == MarkType::point);
    add("c_d_overlap_tick", cd_with_overlap(spec, table, MarkType::tick));
    add("c_d_no_overlap_bar", cd_without_overlap(spec, table, MarkType::bar));
    add("d_d_point", both_positional_discrete(spec) && spec.mark == MarkType::point);
    add("d_d_rect", both_positional_discrete(spec) && spec.mark == MarkType::rect);
    add("log_x", channel_has_scale(spec, Channel::x, ScaleType::log));
    add("log_y", channel_has_scale(spec, Channel::y, ScaleType::log));
    add("ordinal_y", channel_has_scale(spec, Channel::y, ScaleType::ordinal));

    return out;
}

}  // namespace chartlint::reference
