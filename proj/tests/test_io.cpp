#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>

#include "json.hpp"
#include "test_util.hpp"
#include "xedrel/io.hpp"

using namespace xedrel;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "xedrel_io_test";
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

}  // namespace

TEST_CASE("curve tables render stable csv") {
    CurveTable t;
    t.columns = {"theta", "analytical", "mc", "mc_lo", "mc_hi", "empirical"};
    t.rows = {{1.0, 0.2174887890123, 0.2176, 0.2136, 0.2216, 0.2185}};
    const std::string csv = curve_csv(t);
    CHECK(csv.substr(0, csv.find('\n')) == "theta,analytical,mc,mc_lo,mc_hi,empirical");
    CHECK(csv.find("0.217488789,") != std::string::npos);
}

TEST_CASE("json and csv artifacts carry bit-identical values") {
    CurveTable t;
    t.columns = {"theta", "reliability"};
    Rng rng(13001);
    for (int i = 0; i < 50; ++i) {
        t.rows.push_back({1.0 + i * 0.25, rng.next_double()});
    }
    const std::string csv = curve_csv(t);
    const json j = json::parse(curve_json(t));

    // Parse the CSV back and compare against the JSON numbers.
    std::size_t pos = csv.find('\n') + 1;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::size_t end = csv.find('\n', pos);
        const std::string line = csv.substr(pos, end - pos);
        const std::size_t comma = line.find(',');
        const double theta = std::strtod(line.substr(0, comma).c_str(), nullptr);
        const double rel = std::strtod(line.substr(comma + 1).c_str(), nullptr);
        CHECK(theta == j["rows"][r][0].get<double>());
        CHECK(rel == j["rows"][r][1].get<double>());
        pos = end + 1;
    }
}

TEST_CASE("scenario json round-trips through the parser") {
    const Scenario s = builtin_scenario("fig4a");
    const std::string text = scenario_to_json_text(s);
    const Scenario parsed = scenario_from_json_text(text, "roundtrip");
    CHECK(parsed.name == s.name);
    CHECK(parsed.theta == s.theta);
    CHECK(parsed.trace.thread_lo == s.trace.thread_lo);
    CHECK(parsed.trace.thread_hi == s.trace.thread_hi);
    CHECK(parsed.trace.scale_lo == s.trace.scale_lo);
    CHECK(parsed.trace.scale_hi == s.trace.scale_hi);
    CHECK(parsed.trace.seed == s.trace.seed);
    CHECK(parsed.trace.capacity_law.kind == s.trace.capacity_law.kind);
    CHECK(parsed.trace.capacity_law.mu == s.trace.capacity_law.mu);
    CHECK(parsed.trace.demand_law.sigma == s.trace.demand_law.sigma);
    CHECK(parsed.cost.gamma_ref == s.cost.gamma_ref);
    CHECK(parsed.profile.gflops == s.profile.gflops);
}

TEST_CASE("schema violations report the offending field path") {
    try {
        scenario_from_json_text(R"({"schema":1,"name":"x","theta":2.0})", "cfg");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.path() == "cfg.trace");
    }
    try {
        scenario_from_json_text(
            R"({"schema":1,"name":"x","theta":2.0,
                "trace":{"thread_range":[2,6],"scale_range":[0.4,0.9],
                         "change_interval":20,"n_frames":"lots","seed":1,
                         "capacity_law":{"kind":"uniform"},"demand_law":{"kind":"uniform"}},
                "cost_model":{"gamma_ref":343.75}})",
            "cfg");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.path() == "cfg.trace.n_frames");
    }
    try {
        scenario_from_json_text(R"({"schema":2,"name":"x"})", "cfg");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.path() == "cfg.schema");
    }
    CHECK_THROWS_AS(scenario_from_json_text("{nope", "cfg"), SchemaError);
}

TEST_CASE("pool json parses device models") {
    const std::string text = R"({
      "schema": 1,
      "devices": [
        {"label": "a",
         "capacity": {"kind": "uniform", "lo": 100, "hi": 200},
         "demand": {"kind": "truncnorm", "mu": 80, "sigma": 10, "lo": 50, "hi": 110}},
        {"label": "b",
         "capacity": {"kind": "uniform", "lo": 60, "hi": 120},
         "demand": {"kind": "uniform", "lo": 50, "hi": 100}}
      ]})";
    const DevicePool pool = pool_from_json_text(text, "pool");
    CHECK(pool.size() == 2);
    CHECK(pool.devices[0].label == "a");
    CHECK_FALSE(is_uniform(pool.devices[0].demand));

    try {
        pool_from_json_text(R"({"schema":1,"devices":[{"label":"a"}]})", "pool");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.path() == "pool.devices[0].capacity");
    }
}

TEST_CASE("trace csv round-trips with its bounds sidecar") {
    const fs::path dir = temp_dir();
    const fs::path csv = dir / "trace.csv";
    const fs::path bounds = dir / "trace.bounds.json";

    const std::vector<long> frames{0, 20, 40};
    const std::vector<double> values{100.5, 120.25, 97.0};
    write_text_file(csv.string(), trace_to_csv(frames, values));
    write_text_file(bounds.string(), bounds_to_json_text(Bounds(55, 152)));

    const ObservationTrace trace = load_trace_csv(csv.string(), bounds.string());
    CHECK(trace.samples == values);
    REQUIRE(trace.frame_index.has_value());
    CHECK(trace.frame_index->at(1) == 20);
    CHECK(trace.bounds.lo == 55.0);

    write_text_file(csv.string(), "wrong,header\n1,2\n");
    CHECK_THROWS_AS(load_trace_csv(csv.string(), bounds.string()), SchemaError);
}

TEST_CASE("manifest serialization is stable and timestamp-free") {
    Manifest m;
    m.subcommand = "simulate";
    m.parameters = {{"scenario", "fig2a.json"}};
    m.seed = 42;
    m.inputs = {"fig2a.json"};
    m.outputs = {"result.csv"};
    const std::string a = manifest_json(m);
    const std::string b = manifest_json(m);
    CHECK(a == b);
    const json j = json::parse(a);
    CHECK(j["seed"] == 42);
    CHECK(j["tool"]["name"] == "xedrel");
    CHECK(j["subcommand"] == "simulate");
    CHECK_FALSE(j.contains("timestamp"));
}

TEST_CASE("unknown bundled scenario names are rejected") {
    CHECK_THROWS_AS(builtin_scenario("fig99"), SchemaError);
    for (const std::string& name : builtin_scenario_names()) {
        CHECK(builtin_scenario(name).name == name);
    }
}

TEST_CASE("shipped scenario files match the bundled definitions") {
    for (const char* name : {"fig2a", "fig4a", "fig6a", "fig7"}) {
        const fs::path path = fs::path(XEDREL_SOURCE_DIR) / "scenarios" / (std::string(name) + ".json");
        REQUIRE(fs::exists(path));
        const Scenario file = load_scenario(path.string());
        const Scenario builtin = builtin_scenario(name);
        CHECK(file.theta == builtin.theta);
        CHECK(file.trace.seed == builtin.trace.seed);
        CHECK(file.trace.thread_lo == builtin.trace.thread_lo);
        CHECK(file.trace.thread_hi == builtin.trace.thread_hi);
        CHECK(file.trace.n_frames == builtin.trace.n_frames);
        CHECK(file.trace.capacity_law.mu == builtin.trace.capacity_law.mu);
        CHECK(file.trace.demand_law.sigma == builtin.trace.demand_law.sigma);
        CHECK(file.cost.gamma_ref == builtin.cost.gamma_ref);
        CHECK(file.profile.gflops == builtin.profile.gflops);
        CHECK(file.deployment.has_value() == builtin.deployment.has_value());
    }
}
