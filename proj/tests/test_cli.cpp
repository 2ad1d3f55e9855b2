#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout only
};

RunResult run(const std::string& args) {
    const std::string command = std::string(CHARTLINT_BIN) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buffer;
    std::string output;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t n = std::fread(buffer.data(), 1, buffer.size(), pipe)) {
        output.append(buffer.data(), n);
    }
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "chartlint_test_cli") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& path, const std::string& content) {
    std::ofstream(path) << content;
}

}  // namespace

TEST_CASE("lint exit codes") {
    TempDir dir;
    write(dir.path / "table.csv", "cat,val\na,1\nb,2\nc,3\n");
    write(dir.path / "clean.json", R"({
        "mark": "text",
        "encoding": {
            "x": {"field": "val", "type": "quantitative"},
            "text": {"field": "cat", "type": "quantitative"}
        },
        "data": {"name": "table"}
    })");
    write(dir.path / "shape_on_bar.json", R"({
        "mark": "bar",
        "encoding": {
            "x": {"field": "val", "type": "quantitative"},
            "shape": {"field": "cat", "type": "quantitative"}
        },
        "data": {"name": "table"}
    })");

    SUBCASE("clean spec exits zero with an empty array") {
        const auto r = run("lint " + (dir.path / "clean.json").string() + " " +
                           (dir.path / "table.csv").string());
        CHECK(r.exit_code == 0);
        CHECK(r.output == "[]\n");
    }
    SUBCASE("violations exit one and list names") {
        const auto r = run("lint " + (dir.path / "shape_on_bar.json").string() + " " +
                           (dir.path / "table.csv").string());
        CHECK(r.exit_code == 1);
        CHECK(r.output == "[\"shape_without_point\"]\n");
    }
    SUBCASE("missing file exits two") {
        const auto r = run("lint " + (dir.path / "nope.json").string() + " " +
                           (dir.path / "table.csv").string());
        CHECK(r.exit_code == 2);
    }
    SUBCASE("inline data values substitute for a table file") {
        write(dir.path / "inline.json", R"({
            "mark": "bar",
            "encoding": {"x": {"field": "k", "type": "ordinal"}},
            "data": {"values": [{"k": "a"}, {"k": "a"}]}
        })");
        const auto r = run("lint " + (dir.path / "inline.json").string());
        CHECK(r.exit_code == 1);
    }
}

TEST_CASE("catalog lists every rule") {
    const auto r = run("catalog --json");
    CHECK(r.exit_code == 0);
    const auto doc = json::parse(r.output);
    CHECK(doc.size() == 54);
    CHECK(doc[0]["name"] == "size_negative");
}

TEST_CASE("profile prints field statistics") {
    TempDir dir;
    write(dir.path / "t.csv", "k,v\na,-1\nb,2\na,\n");
    const auto r = run("profile " + (dir.path / "t.csv").string());
    CHECK(r.exit_code == 0);
    const auto doc = json::parse(r.output);
    REQUIRE(doc.size() == 2);
    CHECK(doc[0]["name"] == "k");
    CHECK(doc[0]["cardinality"] == 2);
    CHECK(doc[1]["kind"] == "number");
    CHECK(doc[1]["has_negative"] == true);
    CHECK(doc[1]["row_count"] == 3);
}

TEST_CASE("usage errors") {
    const auto r = run("generate --size 0 --tables x --out y");
    CHECK(r.exit_code == 2);
}

TEST_CASE("generate / evaluate / report pipeline closure") {
    TempDir dir;
    const std::string data_dir = std::string(CHARTLINT_DATA_DIR) + "/tables";
    const auto ds = (dir.path / "ds.jsonl").string();

    auto r = run("generate --size 25 --seed 9 --tables " + data_dir + " --out " + ds);
    REQUIRE(r.exit_code == 0);
    REQUIRE(fs::exists(ds));
    REQUIRE(fs::exists(ds + ".manifest.json"));

    SUBCASE("same seed, identical bytes") {
        const auto ds2 = (dir.path / "ds2.jsonl").string();
        r = run("generate --size 25 --seed 9 --tables " + data_dir + " --out " + ds2);
        REQUIRE(r.exit_code == 0);
        std::ifstream a(ds), b(ds2);
        std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
        std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
        CHECK(sa == sb);
    }
    SUBCASE("oracle evaluation scores one") {
        const auto out = (dir.path / "ev").string();
        r = run("evaluate --dataset " + ds + " --mock oracle --k 2 --seed 4 --out " + out);
        REQUIRE(r.exit_code == 0);
        r = run("report --records " + out + " --ground-truth " + ds);
        REQUIRE(r.exit_code == 0);
        CHECK(r.output.find("Global Avg. 1.00") != std::string::npos);
        CHECK(r.output.find("Adherence   1.00") != std::string::npos);
        CHECK(fs::exists(fs::path(out) / "metrics.json"));
        CHECK(fs::exists(fs::path(out) / "report.txt"));
    }
    SUBCASE("disabling the filter raises the manifest divergence") {
        const auto with = (dir.path / "with.jsonl").string();
        const auto without = (dir.path / "without.jsonl").string();
        REQUIRE(run("generate --size 150 --seed 6 --tables " + data_dir + " --out " + with)
                    .exit_code == 0);
        REQUIRE(run("generate --size 150 --seed 6 --no-filter --tables " + data_dir +
                    " --out " + without)
                    .exit_code == 0);
        std::ifstream wf(with + ".manifest.json"), nf(without + ".manifest.json");
        json with_manifest, without_manifest;
        wf >> with_manifest;
        nf >> without_manifest;
        CHECK(with_manifest["final_kl"].get<double>() <
              without_manifest["final_kl"].get<double>());
    }
    SUBCASE("dataset re-lint report matches the stored annotations") {
        const auto r2 = run("lint --dataset " + ds + " --tables " + data_dir);
        CHECK(r2.exit_code == 1);  // generated instances all violate something
        const auto report = json::parse(r2.output);
        CHECK(report.size() == 25);
        std::ifstream in(ds);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto record = json::parse(line);
            CHECK(report.at(record["id"].get<std::string>()) == record["violations"]);
        }
    }
    SUBCASE("unreachable endpoint keeps partial data and exits zero") {
        const auto out = (dir.path / "ev_dead").string();
        r = run("evaluate --dataset " + ds + " --endpoint http://127.0.0.1:1 --model m --k 1 " +
                "--timeout 1 --parallel 8 --out " + out);
        CHECK(r.exit_code == 0);
        REQUIRE(fs::exists(fs::path(out) / "records.jsonl"));
        std::ifstream in(fs::path(out) / "records.jsonl");
        std::string line;
        int lines = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            ++lines;
            const auto record = json::parse(line);
            CHECK(record["failure"] == "transport");
            CHECK(record["adherent"] == false);
        }
        CHECK(lines == 25);
    }
}
