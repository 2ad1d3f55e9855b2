#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "chartlint/genset.hpp"
#include "chartlint/lint_batch.hpp"
#include "chartlint/rules_reference.hpp"

namespace fs = std::filesystem;
using namespace chartlint;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double seconds(std::chrono::steady_clock::duration d) {
    return std::chrono::duration<double>(d).count();
}

template <typename F>
double timed(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return seconds(std::chrono::steady_clock::now() - start);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compare the lint engine (serial and parallel) with the naive reference"};
    std::size_t n = 20000;
    std::uint64_t seed = 1;
    std::string tables_dir = "data/tables";
    app.add_option("--n", n, "number of random (spec, table) pairs");
    app.add_option("--seed", seed, "sampler seed");
    app.add_option("--tables", tables_dir, "directory of data tables");
    CLI11_PARSE(app, argc, argv);

    std::vector<DataTable> tables;
    {
        std::vector<fs::path> paths;
        for (const auto& entry : fs::directory_iterator(tables_dir)) {
            const auto ext = entry.path().extension().string();
            if (ext == ".csv" || ext == ".json") paths.push_back(entry.path());
        }
        std::sort(paths.begin(), paths.end());
        for (const auto& path : paths) {
            tables.push_back(load_table(path.stem().string(), slurp(path.string())));
        }
    }
    if (tables.empty()) {
        std::cerr << "no tables in " << tables_dir << "\n";
        return 2;
    }

    std::vector<TableProfiles> profiles;
    profiles.reserve(tables.size());
    for (const auto& t : tables) profiles.push_back(profile_table(t));

    Rng rng(seed);
    SamplerParams params;
    std::vector<ChartSpec> specs;
    std::vector<std::size_t> table_of;
    specs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t t = rng.index(tables.size());
        specs.push_back(sample_spec(rng, tables[t], params));
        table_of.push_back(t);
    }

    std::vector<LintItem> items;
    items.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        items.push_back({&specs[i], &tables[table_of[i]], &profiles[table_of[i]]});
    }

    std::vector<ViolationSet> serial, parallel, reference;
    const double t_serial = timed([&] { serial = lint_batch_serial(items); });
    const double t_parallel = timed([&] { parallel = lint_batch(items); });
    const double t_reference = timed([&] {
        reference.resize(items.size());
        for (std::size_t i = 0; i < items.size(); ++i) {
            reference[i] = reference::lint_reference(*items[i].spec, *items[i].table);
        }
    });

    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!(serial[i] == parallel[i]) || !(serial[i] == reference[i])) ++mismatches;
    }

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::cout << "pairs:             " << n << "\n";
    std::cout << "threads:           " << threads << "\n";
    std::cout << "engine serial:     " << t_serial << " s  (" << n / t_serial << " pairs/s)\n";
    std::cout << "engine parallel:   " << t_parallel << " s  (" << n / t_parallel
              << " pairs/s, speedup x" << t_serial / t_parallel << ")\n";
    std::cout << "naive reference:   " << t_reference << " s  (" << n / t_reference
              << " pairs/s)\n";
    std::cout << "agreement:         " << (items.size() - mismatches) << "/" << items.size()
              << "\n";
    return mismatches == 0 ? 0 : 1;
}
