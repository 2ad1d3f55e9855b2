#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chartlint/chart_spec.hpp"

namespace chartlint {

// A cell is null, a number, or a string.
using Cell = std::variant<std::monostate, double, std::string>;

inline bool is_null(const Cell& c) { return std::holds_alternative<std::monostate>(c); }

struct DataTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;  // every row has columns.size() cells

    std::optional<std::size_t> column_index(std::string_view column) const;
};

enum class FieldKind { number, string };

struct FieldProfile {
    std::string name;
    FieldKind kind = FieldKind::string;
    std::size_t cardinality = 0;  // distinct non-null values
    std::optional<double> min;    // number kind, over non-null cells
    std::optional<double> max;
    bool has_negative = false;
    bool has_positive = false;
    std::size_t row_count = 0;
};

// Loads delimited text (comma separated, header row) or a structured-row
// document (array of flat objects with identical key sets). The format is
// sniffed from the first non-space character. Throws RaggedRows,
// DuplicateColumn, EmptyTable or MalformedDocument.
DataTable load_table(std::string name, std::string_view content);
DataTable load_table_csv(std::string name, std::string_view csv);
DataTable load_table_rows(std::string name, std::string_view json_rows);

// True iff `text` parses as a number in the accepted grammar: optional sign,
// integer/decimal form, optional exponent. Locale-dependent separators are
// rejected. On success stores the value in `out`.
bool parse_number(std::string_view text, double& out);

FieldProfile profile_field(const DataTable& table, std::string_view column);

// Profiles for every column, keyed by column name.
struct TableProfiles {
    std::map<std::string, FieldProfile, std::less<>> by_name;
    const FieldProfile& at(std::string_view column) const;  // throws UnknownColumn
};
TableProfiles profile_table(const DataTable& table);

// For a spec whose positional channels form a continuous-by-discrete pair,
// decides whether more than one mark instance lands on a single discrete-axis
// slot. With no aggregation every row is a mark; with any aggregation the
// rows collapse to one mark per (slot, discrete non-positional group).
// Throws NotContinuousByDiscrete when the configuration does not hold.
bool detect_overlap(const ChartSpec& spec, const DataTable& table);

}  // namespace chartlint
