#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helegraph/io.hpp"

using namespace helegraph;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}
} // namespace

TEST_CASE("snapshot: bitwise round trip") {
    Snapshot s;
    s.t = 0.12345678901234567;
    s.period = 2.0 * M_PI;
    s.strip_height = 2.0;
    s.samples = {1.0, 1.0000000000000002, 0.9999999999999999, 1.5, -0.25};
    s.diagnostics.min_f = 0.9999999999999999;
    s.diagnostics.max_f = 1.5;
    s.diagnostics.lip = 0.33333333333333331;
    s.diagnostics.class_k_member = true;
    s.diagnostics.holder_grad = {0.1, 0.2};

    const std::string path = temp_path("hg_snapshot_test.json");
    save_snapshot(s, path);
    const Snapshot r = load_snapshot(path);
    CHECK(r.t == s.t);
    CHECK(r.period == s.period);
    REQUIRE(r.samples.size() == s.samples.size());
    for (size_t i = 0; i < s.samples.size(); ++i) CHECK(r.samples[i] == s.samples[i]);
    CHECK(r.diagnostics.lip == s.diagnostics.lip);
    std::filesystem::remove(path);
}

TEST_CASE("snapshot: truncated files and version mismatches are rejected") {
    const std::string path = temp_path("hg_snapshot_bad.json");
    {
        Snapshot s;
        s.t = 1.0;
        s.period = 1.0;
        s.strip_height = 2.0;
        s.samples = {1.0, 2.0};
        save_snapshot(s, path);
        const std::string full = slurp(path);
        std::ofstream out(path);
        out << full.substr(0, full.size() / 2);
    }
    CHECK_THROWS(load_snapshot(path));
    {
        std::ofstream out(path);
        out << "{\"version\": \"helegraph-snapshot-v0\", \"t\": 0, \"period\": 1, "
               "\"strip_height\": 2, \"samples\": [1], \"diagnostics\": {\"min_f\":0, "
               "\"max_f\":0, \"lip\":0, \"class_k_member\":true, \"holder_grad\":[]}}";
    }
    CHECK_THROWS_WITH_AS(load_snapshot(path), doctest::Contains("version mismatch"),
                         std::runtime_error);
    std::filesystem::remove(path);
}

TEST_CASE("config: defaults, parsing, and field-named errors") {
    const RunConfig defaults = RunConfig::from_json(nlohmann::json::object());
    CHECK(defaults.nx == 128);
    CHECK(defaults.law_kind == "one_phase");

    nlohmann::json j;
    j["grid"] = {{"nx", 64}, {"ny", 48}, {"period", 6.0}};
    j["law"] = {{"kind", "difference"}, {"A2", {{2.0, 0.1}, {0.1, 1.0}}}};
    j["time"] = {{"T", 0.25}, {"cfl", 0.8}};
    const RunConfig c = RunConfig::from_json(j);
    CHECK(c.nx == 64);
    CHECK(c.law().uses_minus_phase());
    CHECK(c.A2.a11 == 2.0);

    auto expect_field = [](nlohmann::json bad, const std::string& field) {
        try {
            (void)RunConfig::from_json(bad);
            FAIL_CHECK("expected ConfigError for ", field);
        } catch (const ConfigError& e) {
            CHECK(e.field == field);
        }
    };
    expect_field({{"time", {{"cfl", 2.0}}}}, "time.cfl");
    expect_field({{"grid", {{"nx", 7}}}}, "grid.nx");
    expect_field({{"law", {{"kind", "bogus"}}}}, "law.kind");
    expect_field({{"tolerances", {{"solver", -1.0}}}}, "tolerances.solver");
    expect_field({{"law", {{"A2", {{1.0, 2.0}, {2.0, 1.0}}}}}}, "law.A2");
}

TEST_CASE("config: deterministic canonical dump and hash") {
    RunConfig a;
    RunConfig b;
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(config_hash(a) == config_hash(b));
    b.seed = 8;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("reports carry version, hash and fixed field order") {
    Report r;
    r.test = "demo";
    r.measured["value"] = 0.5;
    r.pass = true;
    const auto j1 = report_json(r, "abc");
    const auto j2 = report_json(r, "abc");
    CHECK(j1.dump() == j2.dump());
    CHECK(j1["tool_version"] == kToolVersion);
    CHECK(j1["config_hash"] == "abc");
    const std::string dumped = j1.dump();
    CHECK(dumped.find("tool_version") < dumped.find("config_hash"));
    CHECK(dumped.find("config_hash") < dumped.find("measured"));
}

TEST_CASE("csv writers render 17 significant digits with documented headers") {
    const std::string path = temp_path("hg_csv_test.csv");
    write_csv(path, "a,b", {{1.0 / 3.0, 2.0}});
    const std::string text = slurp(path);
    CHECK(text.find("a,b\n") == 0);
    CHECK(text.find("0.33333333333333331") != std::string::npos);
    std::filesystem::remove(path);

    std::vector<DiagnosticsRecord> series(1);
    series[0].t = 0.5;
    series[0].holder_grad = {1.0, 2.0, 3.0};
    write_diagnostics_csv(path, series);
    CHECK(slurp(path).find("t,min_f,max_f,lip,holder_g1,holder_g2,holder_g3") == 0);
    std::filesystem::remove(path);
}

TEST_CASE("environment override of the output directory") {
    RunConfig cfg;
    cfg.output_dir = "from_config";
    setenv("HELEGRAPH_OUT", "/tmp/hg_env_dir", 1);
    CHECK(resolve_output_dir(cfg) == "/tmp/hg_env_dir");
    unsetenv("HELEGRAPH_OUT");
    CHECK(resolve_output_dir(cfg) == "from_config");
}
