#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chartlint/errors.hpp"
#include "chartlint/eval.hpp"
#include "chartlint/genset.hpp"
#include "chartlint/rules.hpp"
#include "chartlint/scoring.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace chartlint;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Resolved configuration goes to stderr so stdout stays machine-readable.
void echo_config(const std::string& command, const json& config) {
    json echo = {{"command", command}, {"config", config}};
    std::cerr << "config: " << echo.dump() << "\n";
}

std::vector<DataTable> load_tables_dir(const std::string& dir) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext == ".csv" || ext == ".json") paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    std::vector<DataTable> tables;
    for (const auto& path : paths) {
        tables.push_back(load_table(path.stem().string(), slurp(path.string())));
    }
    if (tables.empty()) throw std::runtime_error("no .csv or .json tables in '" + dir + "'");
    return tables;
}

// The data table for a lint target: an explicit file wins; otherwise the
// document must carry inline values.
DataTable table_for_spec(const std::string& spec_text, const std::string& table_path) {
    if (!table_path.empty()) {
        return load_table(fs::path(table_path).stem().string(), slurp(table_path));
    }
    const json doc = json::parse(spec_text);
    if (doc.contains("data") && doc["data"].contains("values")) {
        std::string name = "inline";
        if (doc["data"].contains("name") && doc["data"]["name"].is_string()) {
            name = doc["data"]["name"].get<std::string>();
        }
        return load_table_rows(name, doc["data"]["values"].dump());
    }
    throw std::runtime_error("no table given and the document has no inline data values");
}

json violations_json(const ViolationSet& v) {
    json arr = json::array();
    for (const auto& name : v.names) arr.push_back(name);
    return arr;
}

int cmd_lint(const std::string& spec_path, const std::string& table_path,
             const std::string& explain_rule) {
    echo_config("lint", {{"spec", spec_path},
                         {"table", table_path.empty() ? json() : json(table_path)},
                         {"explain", explain_rule.empty() ? json() : json(explain_rule)}});
    const std::string text = slurp(spec_path);
    const ChartSpec spec = parse_spec(text);
    const DataTable table = table_for_spec(text, table_path);

    if (!explain_rule.empty()) {
        std::cout << explain(spec, table, explain_rule) << "\n";
        return 0;
    }

    const ViolationSet violations = lint(spec, table);
    std::cout << violations_json(violations).dump() << "\n";
    return violations.names.empty() ? 0 : 1;
}

// Re-lints a whole dataset file and prints one report object keyed by
// instance id, each value the sorted violation names.
int cmd_lint_dataset(const std::string& dataset_path, const std::string& tables_dir) {
    echo_config("lint", {{"dataset", dataset_path}, {"tables", tables_dir}});
    const auto dataset = read_dataset_file(dataset_path);
    const auto tables = load_tables_dir(tables_dir);
    std::map<std::string, const DataTable*> by_name;
    for (const auto& t : tables) by_name[t.name] = &t;

    nlohmann::ordered_json report = nlohmann::ordered_json::object();
    bool any = false;
    for (const auto& inst : dataset) {
        auto it = by_name.find(inst.table_ref);
        if (it == by_name.end()) {
            throw std::runtime_error("dataset references unknown table '" + inst.table_ref +
                                     "'");
        }
        const ViolationSet violations = lint(inst.spec, *it->second);
        any = any || !violations.names.empty();
        report[inst.id] = violations_json(violations);
    }
    std::cout << report.dump(2) << "\n";
    return any ? 1 : 0;
}

int cmd_profile(const std::string& table_path) {
    echo_config("profile", {{"table", table_path}});
    const DataTable table = load_table(fs::path(table_path).stem().string(), slurp(table_path));
    json out = json::array();
    for (const auto& column : table.columns) {
        const FieldProfile p = profile_field(table, column);
        json entry = {{"name", p.name},
                      {"kind", p.kind == FieldKind::number ? "number" : "string"},
                      {"cardinality", p.cardinality},
                      {"has_negative", p.has_negative},
                      {"has_positive", p.has_positive},
                      {"row_count", p.row_count}};
        if (p.min) entry["min"] = *p.min;
        if (p.max) entry["max"] = *p.max;
        out.push_back(std::move(entry));
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_catalog(bool as_json) {
    echo_config("catalog", {{"json", as_json}});
    if (as_json) {
        json out = json::array();
        for (const auto& rule : rule_catalog()) {
            out.push_back({{"name", rule.name},
                           {"category", std::string(to_string(rule.category))},
                           {"description", rule.description_nl}});
        }
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    bool first = true;
    for (const auto& rule : rule_catalog()) {
        if (!first) std::cout << "\n";
        first = false;
        std::cout << "name: " << rule.name << "  [" << to_string(rule.category) << "]\n"
                  << rule.description_nl << "\n";
    }
    return 0;
}

struct GenerateArgs {
    std::size_t size = 2000;
    std::uint64_t seed = 0;
    double epsilon = 1e-3;
    double temperature = 1e-4;
    std::string tables_dir;
    std::string out_path;
    bool no_filter = false;
    std::size_t max_candidates = 0;
    std::size_t bootstrap_window = 25;
};

int cmd_generate(const GenerateArgs& args) {
    GenConfig config;
    config.target_size = args.size;
    config.seed = args.seed;
    config.epsilon = args.epsilon;
    config.temperature = args.temperature;
    config.filter = !args.no_filter;
    config.max_candidates = args.max_candidates;
    config.bootstrap_window = args.bootstrap_window;
    config.tables = load_tables_dir(args.tables_dir);

    echo_config("generate", json::parse(manifest_json(GenResult{}, config))["config"]);

    const GenResult result = generate_dataset(config);
    write_dataset(args.out_path, result, config);
    std::cerr << "wrote " << result.instances.size() << " instances to " << args.out_path
              << " (examined " << result.candidates_examined << " candidates, final KL "
              << (result.kl_trace.empty() ? 0.0 : result.kl_trace.back()) << ")\n";
    return 0;
}

struct EvaluateArgs {
    std::string dataset_path;
    std::string endpoint_url;
    std::string model;
    int k = 5;
    std::uint64_t seed = 0;
    std::string phrasing = "natural";
    double timeout = 120.0;
    int parallel = 4;
    std::string out_dir;
    std::string mock;
};

int cmd_evaluate(const EvaluateArgs& args) {
    echo_config("evaluate", {{"dataset", args.dataset_path},
                             {"endpoint", args.endpoint_url},
                             {"model", args.model},
                             {"k", args.k},
                             {"seed", args.seed},
                             {"phrasing", args.phrasing},
                             {"timeout", args.timeout},
                             {"parallel", args.parallel},
                             {"out", args.out_dir},
                             {"mock", args.mock.empty() ? json() : json(args.mock)}});

    const auto dataset = read_dataset_file(args.dataset_path);

    std::unique_ptr<Endpoint> endpoint;
    if (!args.mock.empty()) {
        std::map<std::string, ViolationSet> truth;
        for (const auto& inst : dataset) truth[inst.id] = inst.violations;
        if (args.mock == "oracle") {
            endpoint = make_oracle_endpoint(std::move(truth));
        } else if (args.mock == "empty") {
            endpoint = make_empty_endpoint();
        } else if (args.mock.rfind("noisy:", 0) == 0) {
            endpoint = make_noisy_endpoint(std::move(truth), std::stod(args.mock.substr(6)),
                                           args.seed);
        } else {
            throw std::runtime_error("unknown mock '" + args.mock + "'");
        }
    } else {
        if (args.endpoint_url.empty()) {
            throw std::runtime_error("either --endpoint or --mock is required");
        }
        EndpointConfig config;
        config.base_url = args.endpoint_url;
        config.model = args.model;
        config.timeout_s = args.timeout;
        config.max_parallel = args.parallel;
        config.repetitions = args.k;
        config.seed = args.seed;
        endpoint = make_http_endpoint(config);
    }

    fs::create_directories(args.out_dir);
    RunEvalOptions options;
    options.k = args.k;
    options.seed = args.seed;
    options.phrasing = args.phrasing == "formal" ? Phrasing::formal : Phrasing::natural;
    options.max_parallel = args.parallel;
    options.journal_path = (fs::path(args.out_dir) / "records.jsonl").string();

    if (options.phrasing == Phrasing::formal) {
        std::vector<std::string> warnings;
        render_problem_list(rule_catalog(), options.phrasing, &warnings);
        if (!warnings.empty()) {
            std::cerr << "warning: " << warnings.size()
                      << " rule(s) have no formal phrasing; their natural descriptions are "
                         "used instead\n";
        }
    }

    const auto records = run_eval(dataset, *endpoint, options);

    std::size_t failed = 0;
    for (const auto& record : records) {
        if (record.failure) ++failed;
    }
    if (failed == records.size()) {
        std::cerr << "warning: every request failed; partial data kept in " << args.out_dir
                  << "\n";
    } else if (failed > 0) {
        std::cerr << "warning: " << failed << "/" << records.size() << " requests failed\n";
    }
    std::cerr << "wrote " << records.size() << " records to " << options.journal_path << "\n";
    return 0;
}

int cmd_report(const std::string& records_path, const std::string& truth_path) {
    echo_config("report", {{"records", records_path}, {"ground_truth", truth_path}});

    fs::path records_file(records_path);
    if (fs::is_directory(records_file)) records_file /= "records.jsonl";
    const auto records = read_records_file(records_file.string());

    std::map<std::string, ViolationSet> truth;
    for (const auto& inst : read_dataset_file(truth_path)) truth[inst.id] = inst.violations;

    const Metrics metrics = score(records, truth, rule_catalog());
    const std::string report = render_report(metrics, rule_catalog());

    const fs::path out_dir = records_file.parent_path();
    std::ofstream(out_dir / "metrics.json") << metrics_to_json(metrics) << "\n";
    std::ofstream(out_dir / "report.txt") << report;
    std::cout << report;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chart design-rule linter, dataset generator and model evaluation harness"};
    app.require_subcommand(1);

    // lint
    std::string lint_spec, lint_table, lint_explain, lint_dataset, lint_tables_dir;
    auto* lint_cmd = app.add_subcommand("lint", "check a chart document against the rule set");
    lint_cmd->add_option("spec", lint_spec, "chart document");
    lint_cmd->add_option("table", lint_table, "data table (csv or json rows)");
    lint_cmd->add_option("--explain", lint_explain, "explain one rule instead of linting");
    lint_cmd->add_option("--dataset", lint_dataset, "re-lint a dataset file instead");
    lint_cmd->add_option("--tables", lint_tables_dir, "tables directory for --dataset");

    // profile
    std::string profile_table_path;
    auto* profile_cmd = app.add_subcommand("profile", "print per-column field statistics");
    profile_cmd->add_option("table", profile_table_path, "data table")->required();

    // catalog
    bool catalog_json = false;
    auto* catalog_cmd = app.add_subcommand("catalog", "print the rule catalog");
    catalog_cmd->add_flag("--json", catalog_json, "machine-readable output");

    // generate
    GenerateArgs gen;
    auto* gen_cmd = app.add_subcommand("generate", "synthesize a balanced annotated dataset");
    gen_cmd->add_option("--size", gen.size, "instances to generate")
        ->default_val(2000)
        ->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen.seed, "RNG seed")->default_val(0);
    gen_cmd->add_option("--epsilon", gen.epsilon, "deterministic-acceptance threshold")
        ->default_val(1e-3)
        ->check(CLI::PositiveNumber);
    gen_cmd->add_option("--temp", gen.temperature, "acceptance temperature")
        ->default_val(1e-4)
        ->check(CLI::PositiveNumber);
    gen_cmd->add_option("--tables", gen.tables_dir, "directory of data tables")->required();
    gen_cmd->add_option("--out", gen.out_path, "output dataset file")->required();
    gen_cmd->add_flag("--no-filter", gen.no_filter, "disable the divergence filter");
    gen_cmd->add_option("--max-candidates", gen.max_candidates,
                        "candidate budget (0 = size * 1000)");
    gen_cmd->add_option("--bootstrap-window", gen.bootstrap_window,
                        "acceptances before the filter engages");

    // evaluate
    EvaluateArgs ev;
    auto* eval_cmd = app.add_subcommand("evaluate", "run a model over a dataset");
    eval_cmd->add_option("--dataset", ev.dataset_path, "dataset file")->required();
    eval_cmd->add_option("--endpoint", ev.endpoint_url, "model endpoint base URL");
    eval_cmd->add_option("--model", ev.model, "model name");
    eval_cmd->add_option("--k", ev.k, "repetitions per instance")
        ->default_val(5)
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--seed", ev.seed, "RNG seed")->default_val(0);
    eval_cmd->add_option("--phrasing", ev.phrasing, "problem phrasing")
        ->default_val("natural")
        ->check(CLI::IsMember({"natural", "formal"}));
    eval_cmd->add_option("--timeout", ev.timeout, "request timeout, seconds")
        ->default_val(120.0)
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--parallel", ev.parallel, "max in-flight requests")
        ->default_val(4)
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--out", ev.out_dir, "output directory")->required();
    eval_cmd->add_option("--mock", ev.mock, "built-in endpoint: oracle|empty|noisy:p");

    // report
    std::string report_records, report_truth;
    auto* report_cmd = app.add_subcommand("report", "score records against ground truth");
    report_cmd->add_option("--records", report_records, "records file or directory")->required();
    report_cmd->add_option("--ground-truth", report_truth, "dataset file with annotations")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (lint_cmd->parsed()) {
            if (!lint_dataset.empty()) {
                if (lint_tables_dir.empty()) {
                    std::cerr << "error: --dataset requires --tables\n";
                    return 2;
                }
                return cmd_lint_dataset(lint_dataset, lint_tables_dir);
            }
            if (lint_spec.empty()) {
                std::cerr << "error: a chart document or --dataset is required\n";
                return 2;
            }
            return cmd_lint(lint_spec, lint_table, lint_explain);
        }
        if (profile_cmd->parsed()) return cmd_profile(profile_table_path);
        if (catalog_cmd->parsed()) return cmd_catalog(catalog_json);
        if (gen_cmd->parsed()) return cmd_generate(gen);
        if (eval_cmd->parsed()) return cmd_evaluate(ev);
        if (report_cmd->parsed()) return cmd_report(report_records, report_truth);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
