#include <optional>
#include <sstream>

#include "chartlint/errors.hpp"
#include "chartlint/rules.hpp"

namespace chartlint {

namespace {

std::string describe_encoding(const Encoding& e) {
    std::ostringstream os;
    os << to_string(e.channel) << " (";
    os << (e.field ? "field '" + *e.field + "'" : std::string("no field"));
    os << ", scale " << to_string(e.scale);
    if (e.binned) os << ", binned";
    if (e.aggregate) os << ", aggregate " << to_string(*e.aggregate);
    if (e.stacked) os << ", stacked";
    os << ", " << (is_continuous(e) ? "continuous" : "discrete") << ")";
    return os.str();
}

std::string positional_summary(const ChartSpec& spec) {
    std::ostringstream os;
    const Encoding* x = spec.encoding(Channel::x);
    const Encoding* y = spec.encoding(Channel::y);
    os << "x is " << (x ? (is_continuous(*x) ? "continuous" : "discrete") : "absent");
    os << ", y is " << (y ? (is_continuous(*y) ? "continuous" : "discrete") : "absent");
    return os.str();
}

}  // namespace

std::string explain(const ChartSpec& spec, const DataTable& table, std::string_view rule) {
    const RuleDescriptor& desc = rule_catalog()[catalog_index(rule)];
    const TableProfiles profiles = profile_table(table);
    const bool fires = lint(spec, table, profiles).contains(rule);

    std::ostringstream os;
    os << desc.name << ": " << (fires ? "fires" : "does not fire") << "\n";
    os << "  mark is '" << to_string(spec.mark) << "'; " << positional_summary(spec) << "\n";

    for (const auto& e : spec.encodings) {
        os << "  encoding " << describe_encoding(e);
        if (e.field) {
            const FieldProfile& p = profiles.at(*e.field);
            os << "; field kind " << (p.kind == FieldKind::number ? "number" : "string")
               << ", cardinality " << p.cardinality;
            if (p.kind == FieldKind::number && p.min && p.max) {
                os << ", range [" << *p.min << ", " << *p.max << "]";
            }
        }
        os << "\n";
    }

    if (rule.starts_with("c_d_")) {
        const Encoding* x = spec.encoding(Channel::x);
        const Encoding* y = spec.encoding(Channel::y);
        const bool cd = x && y && (is_continuous(*x) != is_continuous(*y));
        os << "  continuous-by-discrete configuration: " << (cd ? "yes" : "no") << "\n";
        if (cd) {
            os << "  overlap detected: " << (detect_overlap(spec, table) ? "yes" : "no") << "\n";
        }
    }
    if (rule == "polar_coordinate") {
        os << "  coordinates: "
           << (spec.coordinates == Coordinates::polar ? "polar" : "cartesian") << "\n";
    }

    os << "  rule: " << desc.description_nl;
    return os.str();
}

}  // namespace chartlint
