#include "chartlint/data_table.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "chartlint/errors.hpp"

namespace chartlint {

std::optional<std::size_t> DataTable::column_index(std::string_view column) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == column) return i;
    }
    return std::nullopt;
}

bool parse_number(std::string_view text, double& out) {
    if (text.empty()) return false;
    std::size_t i = 0;
    if (text[i] == '+' || text[i] == '-') ++i;
    std::size_t int_digits = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i, ++int_digits;
    std::size_t frac_digits = 0;
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i, ++frac_digits;
    }
    if (int_digits + frac_digits == 0) return false;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
        std::size_t exp_digits = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i, ++exp_digits;
        if (exp_digits == 0) return false;
    }
    if (i != text.size()) return false;

    std::string_view body = text;
    if (body.front() == '+') body.remove_prefix(1);  // from_chars rejects a leading '+'
    const auto* first = body.data();
    const auto* last = body.data() + body.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

namespace {

// RFC-4180-ish cells: optional quoting, "" escapes inside quotes. Lines split
// on \n with a trailing \r stripped. A cell is null iff it is empty and
// unquoted.
struct RawCell {
    std::string text;
    bool quoted = false;
};

std::vector<std::vector<RawCell>> split_csv(std::string_view csv) {
    std::vector<std::vector<RawCell>> lines;
    std::vector<RawCell> row;
    RawCell cell;
    bool in_quotes = false;
    std::size_t i = 0;
    const std::size_t n = csv.size();
    auto end_cell = [&] {
        row.push_back(std::move(cell));
        cell = RawCell{};
    };
    auto end_line = [&] {
        end_cell();
        lines.push_back(std::move(row));
        row.clear();
    };
    while (i < n) {
        const char c = csv[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && csv[i + 1] == '"') {
                    cell.text += '"';
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                cell.text += c;
                ++i;
            }
        } else if (c == '"' && cell.text.empty() && !cell.quoted) {
            in_quotes = true;
            cell.quoted = true;
            ++i;
        } else if (c == ',') {
            end_cell();
            ++i;
        } else if (c == '\n') {
            if (!cell.text.empty() && cell.text.back() == '\r') cell.text.pop_back();
            end_line();
            ++i;
        } else {
            cell.text += c;
            ++i;
        }
    }
    if (in_quotes) throw MalformedDocument("unterminated quote in delimited text");
    // Final line without trailing newline; a lone trailing newline does not
    // produce a phantom empty row.
    if (!cell.text.empty() || cell.quoted || !row.empty()) end_line();
    return lines;
}

void check_columns(const std::vector<std::string>& columns) {
    std::unordered_set<std::string> seen;
    for (const auto& c : columns) {
        if (!seen.insert(c).second) throw DuplicateColumn("duplicate column '" + c + "'");
    }
}

DataTable finish_table(std::string name, std::vector<std::string> columns,
                       std::vector<std::vector<RawCell>> raw_rows) {
    check_columns(columns);
    if (columns.empty()) throw EmptyTable("table '" + name + "' has no columns");
    if (raw_rows.empty()) throw EmptyTable("table '" + name + "' has no rows");

    const std::size_t width = columns.size();
    for (std::size_t r = 0; r < raw_rows.size(); ++r) {
        if (raw_rows[r].size() != width) {
            throw RaggedRows("row " + std::to_string(r + 1) + " has " +
                             std::to_string(raw_rows[r].size()) + " cells, expected " +
                             std::to_string(width));
        }
    }

    // A column is numeric iff every non-null cell parses as a number.
    std::vector<bool> numeric(width, true);
    for (const auto& row : raw_rows) {
        for (std::size_t c = 0; c < width; ++c) {
            const RawCell& cell = row[c];
            if (cell.text.empty() && !cell.quoted) continue;  // null
            double v;
            if (!parse_number(cell.text, v)) numeric[c] = false;
        }
    }

    DataTable table;
    table.name = std::move(name);
    table.columns = std::move(columns);
    table.rows.reserve(raw_rows.size());
    for (auto& row : raw_rows) {
        std::vector<Cell> cells(width);
        for (std::size_t c = 0; c < width; ++c) {
            RawCell& cell = row[c];
            if (cell.text.empty() && !cell.quoted) {
                cells[c] = std::monostate{};
            } else if (numeric[c]) {
                double v = 0;
                parse_number(cell.text, v);
                cells[c] = v;
            } else {
                cells[c] = std::move(cell.text);
            }
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

}  // namespace

DataTable load_table_csv(std::string name, std::string_view csv) {
    auto lines = split_csv(csv);
    if (lines.empty()) throw EmptyTable("table '" + name + "' is empty");
    std::vector<std::string> columns;
    columns.reserve(lines.front().size());
    for (auto& cell : lines.front()) columns.push_back(std::move(cell.text));
    lines.erase(lines.begin());
    return finish_table(std::move(name), std::move(columns), std::move(lines));
}

DataTable load_table_rows(std::string name, std::string_view json_rows) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_rows);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedDocument(e.what());
    }
    if (!doc.is_array()) throw MalformedDocument("structured-row form must be an array");
    if (doc.empty()) throw EmptyTable("table '" + name + "' has no rows");
    if (!doc.front().is_object()) throw MalformedDocument("rows must be flat objects");

    std::vector<std::string> columns;
    for (const auto& [key, _] : doc.front().items()) columns.push_back(key);
    std::sort(columns.begin(), columns.end());
    check_columns(columns);

    const std::size_t width = columns.size();
    std::vector<bool> numeric(width, true);
    for (const auto& row : doc) {
        if (!row.is_object()) throw MalformedDocument("rows must be flat objects");
        if (row.size() != width) {
            throw RaggedRows("rows do not share an identical key set");
        }
        for (std::size_t c = 0; c < width; ++c) {
            auto it = row.find(columns[c]);
            if (it == row.end()) throw RaggedRows("rows do not share an identical key set");
            if (it->is_null()) continue;
            if (!it->is_number()) numeric[c] = false;
            if (it->is_object() || it->is_array()) {
                throw MalformedDocument("rows must be flat objects");
            }
        }
    }

    DataTable table;
    table.name = std::move(name);
    table.columns = columns;
    table.rows.reserve(doc.size());
    for (const auto& row : doc) {
        std::vector<Cell> cells(width);
        for (std::size_t c = 0; c < width; ++c) {
            const auto& v = row.at(columns[c]);
            if (v.is_null()) {
                cells[c] = std::monostate{};
            } else if (numeric[c]) {
                cells[c] = v.get<double>();
            } else if (v.is_string()) {
                cells[c] = v.get<std::string>();
            } else {
                // mixed column demoted to strings; numbers keep their JSON text
                cells[c] = v.dump();
            }
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

DataTable load_table(std::string name, std::string_view content) {
    const auto pos = content.find_first_not_of(" \t\r\n");
    if (pos != std::string_view::npos && content[pos] == '[') {
        return load_table_rows(std::move(name), content);
    }
    return load_table_csv(std::move(name), content);
}

FieldProfile profile_field(const DataTable& table, std::string_view column) {
    const auto idx = table.column_index(column);
    if (!idx) {
        throw UnknownColumn("column '" + std::string(column) + "' not in table '" + table.name +
                            "'");
    }

    FieldProfile p;
    p.name = std::string(column);
    p.row_count = table.rows.size();

    bool numeric = true;
    std::set<double> distinct_numbers;
    std::set<std::string_view> distinct_strings;
    for (const auto& row : table.rows) {
        const Cell& cell = row[*idx];
        if (is_null(cell)) continue;
        if (const double* d = std::get_if<double>(&cell)) {
            distinct_numbers.insert(*d);
            if (!p.min || *d < *p.min) p.min = *d;
            if (!p.max || *d > *p.max) p.max = *d;
        } else {
            numeric = false;
            distinct_strings.insert(std::get<std::string>(cell));
        }
    }

    p.kind = numeric ? FieldKind::number : FieldKind::string;
    p.cardinality = numeric ? distinct_numbers.size() : distinct_strings.size();
    if (p.kind == FieldKind::number) {
        p.has_negative = p.min && *p.min < 0;
        p.has_positive = p.max && *p.max > 0;
    }
    return p;
}

const FieldProfile& TableProfiles::at(std::string_view column) const {
    auto it = by_name.find(column);
    if (it == by_name.end()) {
        throw UnknownColumn("column '" + std::string(column) + "' has no profile");
    }
    return it->second;
}

TableProfiles profile_table(const DataTable& table) {
    TableProfiles profiles;
    for (const auto& column : table.columns) {
        profiles.by_name.emplace(column, profile_field(table, column));
    }
    return profiles;
}

namespace {

// Stable textual key for grouping; numbers use a fixed round-trip format.
void append_cell_key(std::string& key, const Cell& cell) {
    if (is_null(cell)) {
        key += "\x01<null>";
    } else if (const double* d = std::get_if<double>(&cell)) {
        key += "\x01#";
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), *d);
        key.append(buf, ptr);
    } else {
        const std::string& s = std::get<std::string>(cell);
        key += "\x01$";
        key += std::to_string(s.size());  // length prefix keeps concatenated keys unambiguous
        key += ':';
        key += s;
    }
}

}  // namespace

bool detect_overlap(const ChartSpec& spec, const DataTable& table) {
    const Encoding* x = spec.encoding(Channel::x);
    const Encoding* y = spec.encoding(Channel::y);
    if (!x || !y || is_continuous(*x) == is_continuous(*y)) {
        throw NotContinuousByDiscrete(
            "spec does not have exactly one continuous and one discrete positional encoding");
    }
    const Encoding* discrete_pos = is_discrete(*x) ? x : y;

    std::optional<std::size_t> slot_col;
    if (discrete_pos->field) {
        slot_col = table.column_index(*discrete_pos->field);
        if (!slot_col) {
            throw UnknownColumn("column '" + *discrete_pos->field + "' not in table '" +
                                table.name + "'");
        }
    }

    // Discrete non-positional channels refine the grouping under aggregation.
    std::vector<std::size_t> group_cols;
    bool aggregated = false;
    for (const auto& e : spec.encodings) {
        if (e.aggregate) aggregated = true;
        if (!is_positional(e.channel) && is_discrete(e) && e.field) {
            const auto idx = table.column_index(*e.field);
            if (!idx) {
                throw UnknownColumn("column '" + *e.field + "' not in table '" + table.name +
                                    "'");
            }
            group_cols.push_back(*idx);
        }
    }

    if (!aggregated) {
        // Every row is a mark: overlap iff some slot holds more than one row.
        std::unordered_map<std::string, std::size_t> per_slot;
        for (const auto& row : table.rows) {
            std::string key;
            if (slot_col) {
                if (is_null(row[*slot_col])) continue;  // nulls occupy no slot
                append_cell_key(key, row[*slot_col]);
            }
            if (++per_slot[key] > 1) return true;
        }
        return false;
    }

    // Aggregation collapses rows to one mark per (slot, group); overlap iff
    // some slot carries more than one group.
    std::unordered_map<std::string, std::unordered_set<std::string>> groups_per_slot;
    for (const auto& row : table.rows) {
        std::string slot;
        if (slot_col) {
            if (is_null(row[*slot_col])) continue;
            append_cell_key(slot, row[*slot_col]);
        }
        std::string group;
        for (std::size_t c : group_cols) append_cell_key(group, row[c]);
        auto& set = groups_per_slot[slot];
        set.insert(group);
        if (set.size() > 1) return true;
    }
    return false;
}

}  // namespace chartlint
