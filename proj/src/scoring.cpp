#include "chartlint/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chartlint/errors.hpp"

namespace chartlint {

using nlohmann::json;

Metrics score(std::span<const EvalRecord> records,
              const std::map<std::string, ViolationSet>& truth,
              std::span<const RuleDescriptor> catalog) {
    Metrics metrics;
    metrics.records_total = records.size();

    std::set<int> repetitions;
    std::set<std::string_view> instances;
    for (const auto& record : records) {
        if (!truth.count(record.instance_id)) {
            throw MissingGroundTruth("no ground truth for instance '" + record.instance_id +
                                     "'");
        }
        repetitions.insert(record.repetition);
        instances.insert(record.instance_id);
        if (record.adherent) ++metrics.records_adherent;
    }
    metrics.adherence = records.empty() ? 0.0
                                        : static_cast<double>(metrics.records_adherent) /
                                              static_cast<double>(metrics.records_total);

    // support: instances under evaluation whose ground truth contains the rule
    for (const auto& rule : catalog) {
        std::size_t support = 0;
        for (const auto& id : instances) {
            if (truth.find(std::string(id))->second.contains(rule.name)) ++support;
        }
        metrics.per_problem_support[rule.name] = support;
    }

    // confusion counts per (repetition, rule); non-adherent records predict {}
    struct Counts {
        std::size_t tp = 0, fp = 0, fn = 0;
    };
    std::map<int, std::map<std::string_view, Counts>> by_rep;
    for (const auto& record : records) {
        const ViolationSet& expected = truth.find(record.instance_id)->second;
        auto& counts = by_rep[record.repetition];
        std::set<std::string_view> predicted;
        if (record.parsed) {
            for (const auto& name : *record.parsed) predicted.insert(name);
        }
        for (const auto& rule : catalog) {
            const bool in_truth = expected.contains(rule.name);
            const bool in_pred = predicted.count(rule.name) > 0;
            if (in_truth && in_pred) ++counts[rule.name].tp;
            if (!in_truth && in_pred) ++counts[rule.name].fp;
            if (in_truth && !in_pred) ++counts[rule.name].fn;
        }
    }

    // per-rule mean and sample standard deviation across repetitions
    for (const auto& rule : catalog) {
        std::vector<double> f1s;
        for (const int rep : repetitions) {
            const Counts& c = by_rep[rep][rule.name];
            const double denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
            f1s.push_back(denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / denom);
        }
        double mean = 0.0;
        for (double v : f1s) mean += v;
        mean = f1s.empty() ? 0.0 : mean / static_cast<double>(f1s.size());
        double variance = 0.0;
        if (f1s.size() > 1) {
            for (double v : f1s) variance += (v - mean) * (v - mean);
            variance /= static_cast<double>(f1s.size() - 1);
        }
        metrics.per_problem_f1[rule.name] = mean;
        metrics.per_problem_std[rule.name] = std::sqrt(variance);
    }

    // category and global averages over supported rules only
    std::map<RuleCategory, std::pair<double, std::size_t>> category_acc;
    double global_sum = 0.0;
    std::size_t global_n = 0;
    for (const auto& rule : catalog) {
        if (metrics.per_problem_support[rule.name] == 0) continue;
        const double f1 = metrics.per_problem_f1[rule.name];
        auto& [sum, n] = category_acc[rule.category];
        sum += f1;
        ++n;
        global_sum += f1;
        ++global_n;
    }
    for (const auto& [category, acc] : category_acc) {
        metrics.per_category_avg[std::string(to_string(category))] =
            acc.first / static_cast<double>(acc.second);
    }
    metrics.global_avg = global_n ? global_sum / static_cast<double>(global_n) : 0.0;

    return metrics;
}

namespace {

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

std::string render_report(const Metrics& metrics, std::span<const RuleDescriptor> catalog) {
    std::ostringstream os;
    os << "category  problem                                       F1     STD    support\n";
    os << "--------------------------------------------------------------------------\n";

    constexpr RuleCategory order[] = {RuleCategory::encoding, RuleCategory::mark,
                                      RuleCategory::stack, RuleCategory::scale,
                                      RuleCategory::data};
    for (RuleCategory category : order) {
        bool first = true;
        for (const auto& rule : catalog) {
            if (rule.category != category) continue;
            const double f1 = metrics.per_problem_f1.at(rule.name);
            const double sd = metrics.per_problem_std.at(rule.name);
            const std::size_t support = metrics.per_problem_support.at(rule.name);
            char line[128];
            std::snprintf(line, sizeof(line), "%-9s %-44s %5.2f  %5.2f  %7zu\n",
                          first ? std::string(to_string(category)).c_str() : "",
                          rule.name.c_str(), f1, sd, support);
            os << line;
            first = false;
        }
        const auto avg_it = metrics.per_category_avg.find(std::string(to_string(category)));
        char avg_line[128];
        std::snprintf(avg_line, sizeof(avg_line), "%-9s %-44s %5.2f\n", "", "Avg.",
                      avg_it == metrics.per_category_avg.end() ? 0.0 : avg_it->second);
        os << avg_line;
        os << "--------------------------------------------------------------------------\n";
    }
    os << "Global Avg. " << fixed2(metrics.global_avg) << "\n";
    os << "Adherence   " << fixed2(metrics.adherence) << " (" << metrics.records_adherent << "/"
       << metrics.records_total << ")\n";
    return os.str();
}

std::string metrics_to_json(const Metrics& metrics) {
    json doc = json::object();
    doc["per_problem_f1"] = metrics.per_problem_f1;
    doc["per_problem_std"] = metrics.per_problem_std;
    doc["per_problem_support"] = metrics.per_problem_support;
    doc["per_category_avg"] = metrics.per_category_avg;
    doc["global_avg"] = metrics.global_avg;
    doc["adherence"] = metrics.adherence;
    doc["records_total"] = metrics.records_total;
    doc["records_adherent"] = metrics.records_adherent;
    return doc.dump(2);
}

}  // namespace chartlint
