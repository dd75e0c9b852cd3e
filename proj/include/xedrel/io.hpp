#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "xedrel/device.hpp"
#include "xedrel/estimation.hpp"
#include "xedrel/simharness.hpp"

namespace xedrel {

// Input failed structural validation; path points at the offending field
// or file.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class IoError : public std::runtime_error {
public:
    enum class Kind { Read, Write };
    IoError(Kind kind, std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), kind_(kind), path_(std::move(path)) {}
    Kind kind() const { return kind_; }
    const std::string& path() const { return path_; }

private:
    Kind kind_;
    std::string path_;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Floats in CSV artifacts: 9 significant digits, printf %.9g, identical
// bytes across platforms.
std::string format_g9(double v);

// A column-oriented series bundle (first column is the abscissa).
struct CurveTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string curve_csv(const CurveTable& table);
std::string curve_json(const CurveTable& table);

// Per-frame trace artifact:
// frame,threads,scale,capacity_gflops,demand_gflops,inference_s,met_qos
std::string sim_result_csv(const SimResult& result);
std::string sim_result_summary_json(const SimResult& result, const TraceConfig& cfg);

// ---- scenario configs (schema 1) ------------------------------------------

struct Scenario {
    std::string name;
    double theta = 1.0;
    TraceConfig trace;
    CostModel cost{1.0, 1.0};
    CapacityProfile profile;  // synthetic default unless the file overrides
    std::optional<DeploymentConfig> deployment;
};

Scenario scenario_from_json_text(const std::string& text, const std::string& origin);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json_text(const Scenario& s);

// Bundled validation scenarios, addressable by sweep name.
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

// ---- device pools ----------------------------------------------------------

DevicePool pool_from_json_text(const std::string& text, const std::string& origin);
DevicePool load_pool(const std::string& path);

// ---- observation traces ----------------------------------------------------

// CSV with header `frame,value`; bounds arrive in a JSON sidecar
// {"schema":1,"lo":...,"hi":...}.
ObservationTrace load_trace_csv(const std::string& csv_path, const std::string& bounds_path);
std::string trace_to_csv(std::span<const long> frames, std::span<const double> values);
std::string bounds_to_json_text(const Bounds& b);

// ---- run manifests ---------------------------------------------------------

// Every CLI run records what produced its artifacts. Parameter values are
// pre-rendered strings so the manifest serializes identically everywhere.
struct Manifest {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
};

std::string manifest_json(const Manifest& m);

}  // namespace xedrel
