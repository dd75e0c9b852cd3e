#include "xedrel/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "xedrel/version.hpp"

namespace xedrel {

using nlohmann::json;

namespace {

std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

const json& require_field(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) {
        throw SchemaError(join_path(path, key), "missing required field");
    }
    return j.at(key);
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    return j.get<double>();
}

long as_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
    return j.get<long>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path, "expected a string");
    return j.get<std::string>();
}

std::pair<int, int> as_int_range(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw SchemaError(path, "expected [lo, hi]");
    return {static_cast<int>(as_integer(j.at(0), path + "[0]")),
            static_cast<int>(as_integer(j.at(1), path + "[1]"))};
}

std::pair<double, double> as_real_range(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw SchemaError(path, "expected [lo, hi]");
    return {as_number(j.at(0), path + "[0]"), as_number(j.at(1), path + "[1]")};
}

void check_schema_version(const json& j, const std::string& path) {
    const json& v = require_field(j, "schema", path);
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
        throw SchemaError(join_path(path, "schema"),
                          "unsupported schema version, expected " +
                              std::to_string(kSchemaVersion));
    }
}

SamplingLaw law_from_json(const json& j, const std::string& path) {
    SamplingLaw law;
    const std::string kind = as_string(require_field(j, "kind", path), path + ".kind");
    if (kind == "uniform") {
        law.kind = SamplingLaw::Kind::Uniform;
    } else if (kind == "truncnorm") {
        law.kind = SamplingLaw::Kind::TruncNorm;
        law.mu = as_number(require_field(j, "mu", path), path + ".mu");
        law.sigma = as_number(require_field(j, "sigma", path), path + ".sigma");
    } else {
        throw SchemaError(path + ".kind", "expected 'uniform' or 'truncnorm', got '" + kind + "'");
    }
    return law;
}

json law_to_json(const SamplingLaw& law) {
    if (law.kind == SamplingLaw::Kind::Uniform) {
        return json{{"kind", "uniform"}};
    }
    return json{{"kind", "truncnorm"}, {"mu", law.mu}, {"sigma", law.sigma}};
}

ScalarModel model_from_json(const json& j, const std::string& path) {
    const std::string kind = as_string(require_field(j, "kind", path), path + ".kind");
    const double lo = as_number(require_field(j, "lo", path), path + ".lo");
    const double hi = as_number(require_field(j, "hi", path), path + ".hi");
    try {
        if (kind == "uniform") {
            return UniformModel(Bounds(lo, hi));
        }
        if (kind == "truncnorm") {
            const double mu = as_number(require_field(j, "mu", path), path + ".mu");
            const double sigma = as_number(require_field(j, "sigma", path), path + ".sigma");
            return TruncNormModel(mu, sigma, Bounds(lo, hi));
        }
    } catch (const std::invalid_argument& e) {
        throw SchemaError(path, e.what());
    }
    throw SchemaError(path + ".kind", "expected 'uniform' or 'truncnorm', got '" + kind + "'");
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(IoError::Kind::Read, path, "cannot open file for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(IoError::Kind::Write, path, "cannot open file for writing");
    }
    out << content;
    if (!out) {
        throw IoError(IoError::Kind::Write, path, "write failed");
    }
}

std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string curve_csv(const CurveTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out += table.columns[c];
        out += c + 1 < table.columns.size() ? "," : "\n";
    }
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += format_g9(row[c]);
            out += c + 1 < row.size() ? "," : "\n";
        }
    }
    return out;
}

std::string curve_json(const CurveTable& table) {
    json j;
    j["schema"] = kSchemaVersion;
    j["columns"] = table.columns;
    // Same 9-significant-digit values as the CSV artifact, so the two
    // formats round-trip to identical doubles.
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r = json::array();
        for (double v : row) {
            r.push_back(std::strtod(format_g9(v).c_str(), nullptr));
        }
        rows.push_back(r);
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::string sim_result_csv(const SimResult& result) {
    std::string out = "frame,threads,scale,capacity_gflops,demand_gflops,inference_s,met_qos\n";
    for (const FrameRecord& r : result.records) {
        out += std::to_string(r.frame);
        out += ',';
        out += format_g9(r.threads);
        out += ',';
        out += format_g9(r.scale);
        out += ',';
        out += format_g9(r.capacity_gflops);
        out += ',';
        out += format_g9(r.demand_gflops);
        out += ',';
        out += format_g9(r.inference_s);
        out += ',';
        out += r.met_qos ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string sim_result_summary_json(const SimResult& result, const TraceConfig& cfg) {
    json j;
    j["schema"] = kSchemaVersion;
    j["n_frames"] = cfg.n_frames;
    j["change_interval"] = cfg.change_interval;
    j["seed"] = cfg.seed;
    j["theta"] = result.theta;
    j["empirical_reliability"] = result.empirical_reliability;
    j["mean_fps"] = result.mean_fps;
    return j.dump(2) + "\n";
}

Scenario scenario_from_json_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(origin, std::string("invalid JSON: ") + e.what());
    }
    check_schema_version(j, origin);

    Scenario s;
    s.name = as_string(require_field(j, "name", origin), origin + ".name");
    s.theta = as_number(require_field(j, "theta", origin), origin + ".theta");
    if (!(s.theta > 0.0)) throw SchemaError(origin + ".theta", "must be > 0");

    const json& jt = require_field(j, "trace", origin);
    const std::string tp = origin + ".trace";
    auto [tlo, thi] = as_int_range(require_field(jt, "thread_range", tp), tp + ".thread_range");
    s.trace.thread_lo = tlo;
    s.trace.thread_hi = thi;
    auto [slo, shi] = as_real_range(require_field(jt, "scale_range", tp), tp + ".scale_range");
    s.trace.scale_lo = slo;
    s.trace.scale_hi = shi;
    s.trace.change_interval = static_cast<int>(
        as_integer(require_field(jt, "change_interval", tp), tp + ".change_interval"));
    s.trace.n_frames = as_integer(require_field(jt, "n_frames", tp), tp + ".n_frames");
    const json& jseed = require_field(jt, "seed", tp);
    if (!jseed.is_number_integer() || jseed.get<long long>() < 0) {
        throw SchemaError(tp + ".seed", "expected a nonnegative integer");
    }
    s.trace.seed = jseed.get<std::uint64_t>();
    s.trace.capacity_law =
        law_from_json(require_field(jt, "capacity_law", tp), tp + ".capacity_law");
    s.trace.demand_law = law_from_json(require_field(jt, "demand_law", tp), tp + ".demand_law");

    const json& jc = require_field(j, "cost_model", origin);
    const std::string cp = origin + ".cost_model";
    s.cost.gamma_ref = as_number(require_field(jc, "gamma_ref", cp), cp + ".gamma_ref");
    s.cost.s_ref = jc.contains("s_ref") ? as_number(jc.at("s_ref"), cp + ".s_ref") : 1.0;

    if (j.contains("capacity_profile")) {
        const json& jp = j.at("capacity_profile");
        const std::string pp = origin + ".capacity_profile";
        const json& jth = require_field(jp, "threads", pp);
        const json& jgf = require_field(jp, "gflops", pp);
        if (!jth.is_array() || !jgf.is_array() || jth.size() != jgf.size()) {
            throw SchemaError(pp, "threads and gflops must be arrays of equal length");
        }
        CapacityProfile prof;
        for (std::size_t i = 0; i < jth.size(); ++i) {
            prof.threads.push_back(static_cast<int>(
                as_integer(jth.at(i), pp + ".threads[" + std::to_string(i) + "]")));
            prof.gflops.push_back(
                as_number(jgf.at(i), pp + ".gflops[" + std::to_string(i) + "]"));
        }
        s.profile = prof;
    } else {
        s.profile = CapacityProfile::synthetic_default();
    }

    if (j.contains("deployment")) {
        const json& jd = j.at("deployment");
        const std::string dp = origin + ".deployment";
        DeploymentConfig dep;
        dep.n_workers = static_cast<int>(
            as_integer(require_field(jd, "n_workers", dp), dp + ".n_workers"));
        const json& jw = require_field(jd, "worker_thread_ranges", dp);
        if (!jw.is_array()) throw SchemaError(dp + ".worker_thread_ranges", "expected an array");
        for (std::size_t i = 0; i < jw.size(); ++i) {
            dep.worker_thread_ranges.push_back(as_int_range(
                jw.at(i), dp + ".worker_thread_ranges[" + std::to_string(i) + "]"));
        }
        dep.tau_comm_s =
            jd.contains("tau_comm_s") ? as_number(jd.at("tau_comm_s"), dp + ".tau_comm_s") : 0.0;
        if (jd.contains("partition")) {
            const json& jpart = jd.at("partition");
            if (jpart.is_string()) {
                if (jpart.get<std::string>() != "equal") {
                    throw SchemaError(dp + ".partition", "expected 'equal' or an array");
                }
            } else if (jpart.is_array()) {
                std::vector<double> fr;
                for (std::size_t i = 0; i < jpart.size(); ++i) {
                    fr.push_back(
                        as_number(jpart.at(i), dp + ".partition[" + std::to_string(i) + "]"));
                }
                dep.partition = fr;
            } else {
                throw SchemaError(dp + ".partition", "expected 'equal' or an array");
            }
        }
        if (jd.contains("baseline_thread_range")) {
            dep.baseline_thread_range =
                as_int_range(jd.at("baseline_thread_range"), dp + ".baseline_thread_range");
        }
        s.deployment = dep;
    }

    // Structural validation beyond field shapes.
    try {
        s.trace.validate(s.profile, s.cost);
        if (s.deployment) s.deployment->validate(s.profile);
    } catch (const std::exception& e) {
        throw SchemaError(origin, e.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    return scenario_from_json_text(read_text_file(path), path);
}

std::string scenario_to_json_text(const Scenario& s) {
    json j;
    j["schema"] = kSchemaVersion;
    j["name"] = s.name;
    j["theta"] = s.theta;
    j["trace"] = {
        {"thread_range", {s.trace.thread_lo, s.trace.thread_hi}},
        {"scale_range", {s.trace.scale_lo, s.trace.scale_hi}},
        {"change_interval", s.trace.change_interval},
        {"n_frames", s.trace.n_frames},
        {"seed", s.trace.seed},
        {"capacity_law", law_to_json(s.trace.capacity_law)},
        {"demand_law", law_to_json(s.trace.demand_law)},
    };
    j["cost_model"] = {{"gamma_ref", s.cost.gamma_ref}, {"s_ref", s.cost.s_ref}};
    j["capacity_profile"] = {{"threads", s.profile.threads}, {"gflops", s.profile.gflops}};
    if (s.deployment) {
        json jd;
        jd["n_workers"] = s.deployment->n_workers;
        json ranges = json::array();
        for (const auto& [lo, hi] : s.deployment->worker_thread_ranges) {
            ranges.push_back({lo, hi});
        }
        jd["worker_thread_ranges"] = ranges;
        jd["tau_comm_s"] = s.deployment->tau_comm_s;
        if (s.deployment->partition) {
            jd["partition"] = *s.deployment->partition;
        } else {
            jd["partition"] = "equal";
        }
        if (s.deployment->baseline_thread_range) {
            jd["baseline_thread_range"] = {s.deployment->baseline_thread_range->first,
                                           s.deployment->baseline_thread_range->second};
        }
        j["deployment"] = jd;
    }
    return j.dump(2) + "\n";
}

DevicePool pool_from_json_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(origin, std::string("invalid JSON: ") + e.what());
    }
    check_schema_version(j, origin);
    const json& jd = require_field(j, "devices", origin);
    if (!jd.is_array() || jd.empty()) {
        throw SchemaError(origin + ".devices", "expected a nonempty array");
    }
    std::vector<DeviceModel> devices;
    for (std::size_t i = 0; i < jd.size(); ++i) {
        const std::string dp = origin + ".devices[" + std::to_string(i) + "]";
        const json& d = jd.at(i);
        const std::string label = as_string(require_field(d, "label", dp), dp + ".label");
        ScalarModel cap = model_from_json(require_field(d, "capacity", dp), dp + ".capacity");
        ScalarModel dem = model_from_json(require_field(d, "demand", dp), dp + ".demand");
        try {
            devices.emplace_back(std::move(cap), std::move(dem), label);
        } catch (const std::invalid_argument& e) {
            throw SchemaError(dp, e.what());
        }
    }
    try {
        return DevicePool(std::move(devices));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(origin + ".devices", e.what());
    }
}

DevicePool load_pool(const std::string& path) {
    return pool_from_json_text(read_text_file(path), path);
}

ObservationTrace load_trace_csv(const std::string& csv_path, const std::string& bounds_path) {
    const std::string bounds_text = read_text_file(bounds_path);
    json jb;
    try {
        jb = json::parse(bounds_text);
    } catch (const json::parse_error& e) {
        throw SchemaError(bounds_path, std::string("invalid JSON: ") + e.what());
    }
    check_schema_version(jb, bounds_path);
    const double lo = as_number(require_field(jb, "lo", bounds_path), bounds_path + ".lo");
    const double hi = as_number(require_field(jb, "hi", bounds_path), bounds_path + ".hi");

    const std::string csv = read_text_file(csv_path);
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "frame,value") {
        throw SchemaError(csv_path, "expected header 'frame,value'");
    }
    std::vector<double> values;
    std::vector<long> frames;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw SchemaError(csv_path + ":" + std::to_string(lineno), "expected 'frame,value'");
        }
        try {
            frames.push_back(std::stol(line.substr(0, comma)));
            values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw SchemaError(csv_path + ":" + std::to_string(lineno), "malformed row");
        }
    }
    try {
        return ObservationTrace(std::move(values), Bounds(lo, hi), std::move(frames));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(csv_path, e.what());
    }
}

std::string trace_to_csv(std::span<const long> frames, std::span<const double> values) {
    if (frames.size() != values.size()) {
        throw std::invalid_argument("trace_to_csv: frame/value length mismatch");
    }
    std::string out = "frame,value\n";
    for (std::size_t i = 0; i < frames.size(); ++i) {
        out += std::to_string(frames[i]);
        out += ',';
        out += format_g9(values[i]);
        out += '\n';
    }
    return out;
}

std::string bounds_to_json_text(const Bounds& b) {
    json j;
    j["schema"] = kSchemaVersion;
    j["lo"] = b.lo;
    j["hi"] = b.hi;
    return j.dump(2) + "\n";
}

std::string manifest_json(const Manifest& m) {
    json j;
    j["schema"] = kSchemaVersion;
    j["tool"] = {{"name", "xedrel"}, {"version", kVersion}};
    j["subcommand"] = m.subcommand;
    json params = json::object();
    for (const auto& [k, v] : m.parameters) params[k] = v;
    j["parameters"] = params;
    if (m.seed) {
        j["seed"] = *m.seed;
    } else {
        j["seed"] = nullptr;
    }
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    return j.dump(2) + "\n";
}

// ---- bundled scenarios -----------------------------------------------------

namespace {

Scenario make_fig2a() {
    Scenario s;
    s.name = "fig2a";
    s.theta = 2.0;
    s.trace.thread_lo = 2;
    s.trace.thread_hi = 6;
    s.trace.scale_lo = 0.4;
    s.trace.scale_hi = 0.9;
    s.trace.change_interval = 20;
    s.trace.n_frames = 2590;
    s.trace.seed = 424201;
    s.trace.capacity_law = {SamplingLaw::Kind::Uniform, 0.0, 0.0};
    s.trace.demand_law = {SamplingLaw::Kind::Uniform, 0.0, 0.0};
    // Scale range [0.4, 0.9] maps to demand [55, 278.4] GFLOPS: the
    // reference frame is the stream's native resolution, ~5x the cost of
    // the detector's nominal input.
    s.cost = CostModel{343.75, 1.0};
    s.profile = CapacityProfile::synthetic_default();
    return s;
}

Scenario make_fig4a() {
    Scenario s = make_fig2a();
    s.name = "fig4a";
    s.theta = 3.0;
    s.trace.thread_lo = 4;
    s.trace.thread_hi = 8;
    s.trace.seed = 424204;
    // Concentrated laws: observed capacity/demand cluster around typical
    // operating points instead of filling the declared bounds.
    s.trace.capacity_law = {SamplingLaw::Kind::TruncNorm, 160.0, 25.0};
    s.trace.demand_law = {SamplingLaw::Kind::TruncNorm, 38.0, 12.0};
    s.cost = CostModel{82.0, 1.0};
    return s;
}

Scenario make_fig6a() {
    Scenario s = make_fig2a();
    s.name = "fig6a";
    s.theta = 2.5;
    s.trace.thread_lo = 4;
    s.trace.thread_hi = 12;
    s.trace.seed = 424206;
    s.trace.capacity_law = {SamplingLaw::Kind::TruncNorm, 210.0, 35.0};
    s.trace.demand_law = {SamplingLaw::Kind::TruncNorm, 63.0, 16.0};
    s.cost = CostModel{150.0, 1.0};
    return s;
}

Scenario make_fig7() {
    Scenario s = make_fig2a();
    s.name = "fig7";
    s.theta = 5.0;
    s.trace.thread_lo = 2;
    s.trace.thread_hi = 10;
    s.trace.seed = 424207;
    DeploymentConfig dep;
    dep.n_workers = 4;
    dep.worker_thread_ranges = {{2, 4}, {4, 6}, {6, 8}, {8, 10}};
    dep.tau_comm_s = 0.010;
    dep.baseline_thread_range = {{6, 10}};
    s.deployment = dep;
    return s;
}

}  // namespace

Scenario builtin_scenario(const std::string& name) {
    if (name == "fig2a" || name == "fig2c") {
        Scenario s = make_fig2a();
        s.name = name;
        return s;
    }
    if (name == "fig4a") return make_fig4a();
    if (name == "fig6a") return make_fig6a();
    if (name == "fig7") return make_fig7();
    throw SchemaError("scenario", "unknown bundled scenario '" + name + "'");
}

std::vector<std::string> builtin_scenario_names() {
    return {"fig2a", "fig2c", "fig4a", "fig6a", "fig7"};
}

}  // namespace xedrel
