// Command-line surface over the reliability toolkit: analytical curves,
// MLE fits, partition optimization, device selection, Monte Carlo
// estimates, trace-driven simulation, and bundled end-to-end sweeps.
// Every run writes a manifest next to its artifacts; stochastic commands
// take an explicit seed (there is no wall-clock default anywhere).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "xedrel/estimation.hpp"
#include "xedrel/io.hpp"
#include "xedrel/mcoracle.hpp"
#include "xedrel/quadrature.hpp"
#include "xedrel/reliability.hpp"
#include "xedrel/simharness.hpp"
#include "xedrel/system.hpp"
#include "xedrel/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace xedrel;

namespace {

constexpr int kExitSchema = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitWrite = 4;

struct CliFailure {
    int exit_code;
    std::string kind;
    std::string path;
    std::string message;
};

[[noreturn]] void fail(int exit_code, const std::string& kind, const std::string& path,
                       const std::string& message) {
    throw CliFailure{exit_code, kind, path, message};
}

std::string out_dir_default() {
    const char* env = std::getenv("XEDREL_OUT_DIR");
    return env && *env ? env : ".";
}

fs::path resolve_out(const std::string& out_flag, const std::string& default_name) {
    if (out_flag.empty()) {
        return fs::path(out_dir_default()) / default_name;
    }
    return fs::path(out_flag);
}

std::string manifest_path_for(const fs::path& primary) {
    fs::path p = primary;
    p.replace_extension();
    return p.string() + ".manifest.json";
}

void write_artifact(const std::string& path, const std::string& content) {
    try {
        write_text_file(path, content);
    } catch (const IoError& e) {
        fail(kExitWrite, "io", e.path(), e.what());
    }
}

Bounds parse_bounds_flag(const std::string& text, const std::string& flag) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        fail(kExitSchema, "usage", flag, "expected LO,HI");
    }
    try {
        return Bounds(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
    } catch (const std::exception& e) {
        fail(kExitSchema, "usage", flag, e.what());
    }
}

std::vector<double> parse_theta_grid(const std::string& text) {
    double start = 0, stop = 0, step = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0.0 ||
        stop < start) {
        fail(kExitSchema, "usage", "--thetas", "expected START:STOP:STEP with STEP > 0");
    }
    std::vector<double> grid;
    for (double t = start; t <= stop + 1e-9; t += step) {
        grid.push_back(t);
    }
    return grid;
}

struct ModelFlags {
    std::string type = "uniform";
    std::string bounds;
    double mu = 0.0;
    double sigma = 0.0;
};

ScalarModel model_from_flags(const ModelFlags& f, const std::string& which) {
    const Bounds b = parse_bounds_flag(f.bounds, "--" + which + "bounds");
    try {
        if (f.type == "uniform") {
            return UniformModel(b);
        }
        if (f.type == "truncnorm") {
            return TruncNormModel(f.mu, f.sigma, b);
        }
    } catch (const std::invalid_argument& e) {
        fail(kExitSchema, "usage", "--" + which + "type", e.what());
    }
    fail(kExitSchema, "usage", "--" + which + "type", "expected 'uniform' or 'truncnorm'");
}

void add_model_flags(CLI::App* cmd, ModelFlags& f, const std::string& which,
                     const std::string& role) {
    cmd->add_option("--" + which + "type", f.type, role + " model kind (uniform|truncnorm)");
    cmd->add_option("--" + which + "bounds", f.bounds, role + " bounds LO,HI in GFLOPS")
        ->required();
    cmd->add_option("--" + which + "mu", f.mu, role + " truncnorm mu");
    cmd->add_option("--" + which + "sigma", f.sigma, role + " truncnorm sigma");
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---- subcommand state ------------------------------------------------------

struct ReliabilityArgs {
    ModelFlags cap, dem;
    std::string thetas = "1:4:0.25";
    std::string format = "csv";
    std::string out;
};

struct FitArgs {
    std::string trace, bounds, out;
};

struct PartitionArgs {
    std::string pool;
    double theta = 1.0;
    std::string out;
};

struct SelectArgs {
    std::string mode;
    double epsilon = 0.9;
    std::string pool;
    double theta = 1.0;
    double uniform_r = -1.0;
    int pool_size = 0;
    std::string out;
};

struct SimulateArgs {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string out;
};

struct McArgs {
    ModelFlags cap, dem;
    double theta = 1.0;
    long long n = 100000;
    std::uint64_t seed = 0;
    std::string out;
};

struct SweepArgs {
    std::string name;
    std::uint64_t seed = 0;
    std::string out;
};

int run_reliability(const ReliabilityArgs& a) {
    DeviceModel dev(model_from_flags(a.cap, "c"), model_from_flags(a.dem, "d"), "device");
    const std::vector<double> grid = parse_theta_grid(a.thetas);
    std::vector<std::pair<double, double>> curve;
    try {
        curve = reliability_curve(dev, grid);
    } catch (const std::runtime_error& e) {
        fail(kExitNumeric, "numeric", "reliability_curve", e.what());
    }

    CurveTable table;
    table.columns = {"theta", "reliability"};
    for (const auto& [t, r] : curve) {
        table.rows.push_back({t, r});
    }
    const fs::path out =
        resolve_out(a.out, a.format == "json" ? "curve.json" : "curve.csv");
    write_artifact(out.string(), a.format == "json" ? curve_json(table) : curve_csv(table));

    Manifest m;
    m.subcommand = "reliability";
    m.parameters = {{"ctype", a.cap.type},     {"cbounds", a.cap.bounds},
                    {"cmu", g17(a.cap.mu)},    {"csigma", g17(a.cap.sigma)},
                    {"dtype", a.dem.type},     {"dbounds", a.dem.bounds},
                    {"dmu", g17(a.dem.mu)},    {"dsigma", g17(a.dem.sigma)},
                    {"thetas", a.thetas},      {"format", a.format}};
    m.outputs = {out.string()};
    write_artifact(manifest_path_for(out), manifest_json(m));
    std::printf("%s\n", out.string().c_str());
    return 0;
}

int run_fit(const FitArgs& a) {
    ObservationTrace trace = load_trace_csv(a.trace, a.bounds);
    FitResult fit = [&] {
        try {
            return fit_truncnorm_mle(trace);
        } catch (const std::invalid_argument& e) {
            fail(kExitSchema, "input", a.trace, e.what());
        }
    }();
    if (!fit.converged) {
        fail(kExitNumeric, "numeric", a.trace,
             "MLE did not converge within the iteration budget");
    }

    json j;
    j["schema"] = kSchemaVersion;
    j["model"] = {{"kind", "truncnorm"},
                  {"mu", fit.model.mu()},
                  {"sigma", fit.model.sigma()},
                  {"lo", fit.model.bounds().lo},
                  {"hi", fit.model.bounds().hi}};
    j["loglik"] = fit.loglik;
    j["n_samples"] = fit.n_samples;
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;

    const fs::path out = resolve_out(a.out, "fit.json");
    write_artifact(out.string(), j.dump(2) + "\n");

    Manifest m;
    m.subcommand = "fit";
    m.parameters = {{"trace", a.trace}, {"bounds", a.bounds}};
    m.inputs = {a.trace, a.bounds};
    m.outputs = {out.string()};
    write_artifact(manifest_path_for(out), manifest_json(m));
    std::printf("%s\n", out.string().c_str());
    return 0;
}

int run_partition(const PartitionArgs& a) {
    DevicePool pool = load_pool(a.pool);
    PartitionResult res = [&] {
        try {
            return optimize_partition(pool, QosThreshold(a.theta));
        } catch (const PartitionInfeasible& e) {
            fail(kExitNumeric, "infeasible", a.pool, e.what());
        } catch (const std::runtime_error& e) {
            fail(kExitNumeric, "numeric", a.pool, e.what());
        }
    }();

    json j;
    j["schema"] = kSchemaVersion;
    json alloc = json::array();
    for (std::size_t i = 0; i < pool.size(); ++i) {
        alloc.push_back({{"label", pool.devices[i].label},
                         {"alpha", res.allocation.fractions[i]}});
    }
    j["allocation"] = alloc;
    j["reliability"] = res.reliability;
    j["theta"] = a.theta;
    j["stationarity_residual"] =
        partition_stationarity_residual(pool, QosThreshold(a.theta), res.allocation);

    const fs::path out = resolve_out(a.out, "partition.json");
    write_artifact(out.string(), j.dump(2) + "\n");

    Manifest m;
    m.subcommand = "partition";
    m.parameters = {{"pool", a.pool}, {"theta", g17(a.theta)}};
    m.inputs = {a.pool};
    m.outputs = {out.string()};
    write_artifact(manifest_path_for(out), manifest_json(m));
    std::printf("%s\n", out.string().c_str());
    return 0;
}

int run_select(const SelectArgs& a) {
    if (a.mode != "series" && a.mode != "parallel") {
        fail(kExitSchema, "usage", "--mode", "expected 'series' or 'parallel'");
    }
    std::vector<LabeledReliability> candidates;
    std::vector<std::string> inputs;
    if (!a.pool.empty()) {
        DevicePool pool = load_pool(a.pool);
        for (const DeviceModel& d : pool.devices) {
            candidates.push_back({d.label, device_reliability(d, QosThreshold(a.theta))});
        }
        inputs.push_back(a.pool);
    } else if (a.uniform_r > 0.0 && a.pool_size > 0) {
        for (int i = 0; i < a.pool_size; ++i) {
            char label[16];
            std::snprintf(label, sizeof(label), "d%03d", i + 1);
            candidates.push_back({label, a.uniform_r});
        }
    } else {
        fail(kExitSchema, "usage", "--pool",
             "need either --pool or both --uniform-r and --pool-size");
    }

    SelectionResult res = [&] {
        try {
            return a.mode == "series" ? select_series(candidates, a.epsilon)
                                      : select_parallel(candidates, a.epsilon);
        } catch (const std::invalid_argument& e) {
            fail(kExitSchema, "usage", "--epsilon", e.what());
        }
    }();

    json j;
    j["schema"] = kSchemaVersion;
    j["mode"] = a.mode;
    j["epsilon"] = a.epsilon;
    j["n_star"] = res.n_star;
    j["chosen_labels"] = res.chosen_labels;
    j["achieved_reliability"] = res.achieved_reliability;
    j["feasible"] = res.feasible;
    if (a.mode == "parallel") {
        double r_min = 1.0;
        for (const auto& c : candidates) r_min = std::min(r_min, c.reliability);
        if (r_min > 0.0 && r_min < 1.0) {
            j["worst_case_bound"] = parallel_worst_case_bound(r_min, a.epsilon);
        }
    }

    const fs::path out = resolve_out(a.out, "selection.json");
    write_artifact(out.string(), j.dump(2) + "\n");

    Manifest m;
    m.subcommand = "select";
    m.parameters = {{"mode", a.mode},
                    {"epsilon", g17(a.epsilon)},
                    {"theta", g17(a.theta)},
                    {"pool", a.pool},
                    {"uniform_r", g17(a.uniform_r)},
                    {"pool_size", std::to_string(a.pool_size)}};
    m.inputs = inputs;
    m.outputs = {out.string()};
    write_artifact(manifest_path_for(out), manifest_json(m));
    std::printf("%s\n", out.string().c_str());
    return 0;
}

int run_simulate(const SimulateArgs& a) {
    Scenario scenario = load_scenario(a.scenario);
    if (a.seed) {
        scenario.trace.seed = *a.seed;
    }

    const fs::path dir = a.out.empty() ? fs::path(out_dir_default()) : fs::path(a.out);
    std::error_code ec;
    fs::create_directories(dir, ec);

    SimResult result;
    try {
        result = run_stream_sim(scenario.trace, scenario.cost, scenario.profile,
                                QosThreshold(scenario.theta));
    } catch (const std::invalid_argument& e) {
        fail(kExitSchema, "input", a.scenario, e.what());
    }

    const fs::path csv_path = dir / "result.csv";
    const fs::path summary_path = dir / "summary.json";
    write_artifact(csv_path.string(), sim_result_csv(result));
    write_artifact(summary_path.string(), sim_result_summary_json(result, scenario.trace));

    Manifest m;
    m.subcommand = "simulate";
    m.parameters = {{"scenario", a.scenario}, {"name", scenario.name}};
    m.seed = scenario.trace.seed;
    m.inputs = {a.scenario};
    m.outputs = {csv_path.string(), summary_path.string()};
    write_artifact((dir / "manifest.json").string(), manifest_json(m));
    std::printf("%s\n", csv_path.string().c_str());
    return 0;
}

int run_mc(const McArgs& a) {
    DeviceModel dev(model_from_flags(a.cap, "c"), model_from_flags(a.dem, "d"), "device");
    McEstimate est = [&] {
        try {
            return mc_single_reliability(dev, QosThreshold(a.theta), a.n, a.seed);
        } catch (const std::invalid_argument& e) {
            fail(kExitSchema, "usage", "--n", e.what());
        }
    }();

    json j;
    j["schema"] = kSchemaVersion;
    j["estimate"] = est.estimate;
    j["n_samples"] = est.n_samples;
    j["ci_lo"] = est.ci_lo;
    j["ci_hi"] = est.ci_hi;
    j["seed"] = est.seed;
    j["theta"] = a.theta;

    const fs::path out = resolve_out(a.out, "mc.json");
    write_artifact(out.string(), j.dump(2) + "\n");

    Manifest m;
    m.subcommand = "mc";
    m.parameters = {{"ctype", a.cap.type},   {"cbounds", a.cap.bounds},
                    {"cmu", g17(a.cap.mu)},  {"csigma", g17(a.cap.sigma)},
                    {"dtype", a.dem.type},   {"dbounds", a.dem.bounds},
                    {"dmu", g17(a.dem.mu)},  {"dsigma", g17(a.dem.sigma)},
                    {"theta", g17(a.theta)}, {"n", std::to_string(a.n)}};
    m.seed = a.seed;
    m.outputs = {out.string()};
    write_artifact(manifest_path_for(out), manifest_json(m));
    std::printf("%s\n", out.string().c_str());
    return 0;
}

// ---- bundled sweeps --------------------------------------------------------

DeviceModel scenario_device(const Scenario& s) {
    const Bounds cb(s.profile.capacity_at(s.trace.thread_lo),
                    s.profile.capacity_at(s.trace.thread_hi));
    const Bounds db(s.cost.demand_of_scale(s.trace.scale_lo),
                    s.cost.demand_of_scale(s.trace.scale_hi));
    ScalarModel cap = s.trace.capacity_law.kind == SamplingLaw::Kind::Uniform
                          ? ScalarModel{UniformModel(cb)}
                          : ScalarModel{TruncNormModel(s.trace.capacity_law.mu,
                                                       s.trace.capacity_law.sigma, cb)};
    ScalarModel dem = s.trace.demand_law.kind == SamplingLaw::Kind::Uniform
                          ? ScalarModel{UniformModel(db)}
                          : ScalarModel{TruncNormModel(s.trace.demand_law.mu,
                                                       s.trace.demand_law.sigma, db)};
    return DeviceModel(cap, dem, s.name);
}

std::vector<double> default_grid() {
    std::vector<double> grid;
    for (double t = 1.0; t <= 4.0 + 1e-9; t += 0.25) grid.push_back(t);
    return grid;
}

void sweep_triangle(const Scenario& scenario, std::uint64_t seed, CurveTable& table) {
    Scenario s = scenario;
    s.trace.seed = seed;
    const SimResult result =
        run_stream_sim(s.trace, s.cost, s.profile, QosThreshold(s.theta));
    const DeviceModel dev = scenario_device(s);
    const std::vector<double> grid = default_grid();
    const auto analytic = reliability_curve(dev, grid);
    const auto empirical = empirical_reliability_curve(result, grid);

    table.columns = {"theta", "analytical", "mc", "mc_lo", "mc_hi", "empirical"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const McEstimate mc = mc_single_reliability(dev, QosThreshold(grid[i]), 100'000,
                                                    Rng::mix64(seed + i + 1));
        table.rows.push_back({grid[i], analytic[i].second, mc.estimate, mc.ci_lo, mc.ci_hi,
                              empirical[i].second});
    }
}

void sweep_demand_split(const Scenario& scenario, std::uint64_t seed, CurveTable& table) {
    Scenario s = scenario;
    s.trace.seed = seed;
    const SimResult result =
        run_stream_sim(s.trace, s.cost, s.profile, QosThreshold(s.theta));
    SimResult low, mid, high;
    low.theta = mid.theta = high.theta = result.theta;
    for (const FrameRecord& r : result.records) {
        if (r.demand_gflops < 104.0) {
            low.records.push_back(r);
        } else if (r.demand_gflops > 178.0) {
            high.records.push_back(r);
        } else {
            mid.records.push_back(r);
        }
    }
    const std::vector<double> grid = default_grid();
    const auto lo_curve = empirical_reliability_curve(low, grid);
    const auto mid_curve = empirical_reliability_curve(mid, grid);
    const auto hi_curve = empirical_reliability_curve(high, grid);
    table.columns = {"theta", "low_demand", "mid_demand", "high_demand"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        table.rows.push_back(
            {grid[i], lo_curve[i].second, mid_curve[i].second, hi_curve[i].second});
    }
}

void sweep_fit_overlay(const Scenario& scenario, std::uint64_t seed, CurveTable& table) {
    Scenario s = scenario;
    s.trace.seed = seed;
    const SimResult result =
        run_stream_sim(s.trace, s.cost, s.profile, QosThreshold(s.theta));
    const IndependentSamples ind = independent_samples(result, s.trace.change_interval);

    const Bounds cb(s.profile.capacity_at(s.trace.thread_lo),
                    s.profile.capacity_at(s.trace.thread_hi));
    const Bounds db(s.cost.demand_of_scale(s.trace.scale_lo),
                    s.cost.demand_of_scale(s.trace.scale_hi));
    const FitResult fc = fit_truncnorm_mle(ObservationTrace(ind.capacity, cb));
    const FitResult fd = fit_truncnorm_mle(ObservationTrace(ind.demand, db));
    const DeviceModel true_dev = scenario_device(s);
    const DeviceModel fit_dev(ScalarModel{fc.model}, ScalarModel{fd.model}, "fitted");

    const std::vector<double> grid = default_grid();
    const auto analytic = reliability_curve(true_dev, grid);
    const auto fitted = reliability_curve(fit_dev, grid);
    const auto empirical = empirical_reliability_curve(result, grid);
    table.columns = {"theta", "analytical", "fitted", "mi", "mc", "mc_lo", "mc_hi", "empirical"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const McEstimate mc = mc_single_reliability(true_dev, QosThreshold(grid[i]), 100'000,
                                                    Rng::mix64(seed + i + 1));
        table.rows.push_back({grid[i], analytic[i].second, fitted[i].second,
                              reliability_mi(cb, db, QosThreshold(grid[i])), mc.estimate,
                              mc.ci_lo, mc.ci_hi, empirical[i].second});
    }
}

void sweep_convergence(const Scenario& scenario, std::uint64_t seed, CurveTable& table) {
    Scenario s = scenario;
    s.trace.seed = seed;
    const SimResult result =
        run_stream_sim(s.trace, s.cost, s.profile, QosThreshold(s.theta));
    const IndependentSamples ind = independent_samples(result, s.trace.change_interval);

    const Bounds cb(s.profile.capacity_at(s.trace.thread_lo),
                    s.profile.capacity_at(s.trace.thread_hi));
    const Bounds db(s.cost.demand_of_scale(s.trace.scale_lo),
                    s.cost.demand_of_scale(s.trace.scale_hi));
    const DeviceModel true_dev = scenario_device(s);
    const double r_true = device_reliability(true_dev, QosThreshold(s.theta));
    const double r_mi = reliability_mi(cb, db, QosThreshold(s.theta));

    table.columns = {"n",          "reliability_est", "reliability_true", "reliability_mi",
                     "mu_c_hat",   "sigma_c_hat",     "mu_d_hat",         "sigma_d_hat"};
    for (std::size_t n = 0; n <= ind.capacity.size(); n += 10) {
        double est = r_mi;
        double mu_c = cb.midpoint(), sg_c = cb.range() / std::sqrt(12.0);
        double mu_d = db.midpoint(), sg_d = db.range() / std::sqrt(12.0);
        if (n >= 2) {
            std::vector<double> ch(ind.capacity.begin(), ind.capacity.begin() + n);
            std::vector<double> dh(ind.demand.begin(), ind.demand.begin() + n);
            const FitResult fc = fit_truncnorm_mle(ObservationTrace(ch, cb));
            const FitResult fd = fit_truncnorm_mle(ObservationTrace(dh, db));
            est = reliability_hist(fc.model, fd.model, QosThreshold(s.theta));
            mu_c = fc.model.mu();
            sg_c = fc.model.sigma();
            mu_d = fd.model.mu();
            sg_d = fd.model.sigma();
        }
        table.rows.push_back({static_cast<double>(n), est, r_true, r_mi, mu_c, sg_c, mu_d, sg_d});
    }
}

void sweep_deployment(const Scenario& scenario, std::uint64_t seed, const fs::path& dir,
                      std::vector<std::string>& outputs) {
    Scenario s = scenario;
    s.trace.seed = seed;
    const DeploymentReport rep =
        run_series_deployment(*s.deployment, s.trace, s.cost, s.profile);

    std::string tcsv = "role,mean_fps,mean_latency_s\n";
    tcsv += "baseline," + format_g9(rep.baseline.mean_fps) + "," +
            format_g9(rep.baseline.mean_latency_s) + "\n";
    for (std::size_t w = 0; w < rep.workers.size(); ++w) {
        tcsv += "worker" + std::to_string(w + 1) + "," + format_g9(rep.workers[w].mean_fps) +
                "," + format_g9(rep.workers[w].mean_latency_s) + "\n";
    }
    tcsv += "system," + format_g9(rep.system.mean_fps) + "," +
            format_g9(rep.system.mean_latency_s) + "\n";
    const fs::path tpath = dir / (s.name + "_throughput.csv");
    write_artifact(tpath.string(), tcsv);
    outputs.push_back(tpath.string());

    json j;
    j["schema"] = kSchemaVersion;
    j["speedup_vs_baseline"] = rep.speedup_vs_baseline;
    j["system"] = {{"mean_fps", rep.system.mean_fps},
                   {"mean_latency_s", rep.system.mean_latency_s}};
    j["baseline"] = {{"mean_fps", rep.baseline.mean_fps},
                     {"mean_latency_s", rep.baseline.mean_latency_s}};
    const fs::path spath = dir / (s.name + "_summary.json");
    write_artifact(spath.string(), j.dump(2) + "\n");
    outputs.push_back(spath.string());
}

void sweep_selection(const std::string& name, CurveTable& table) {
    const bool series = name == "fig8a";
    const std::vector<double> rs =
        series ? std::vector<double>{0.90, 0.95, 0.99} : std::vector<double>{0.50, 0.70, 0.90};
    std::vector<LabeledReliability> hetero;
    for (int i = 0; i < 20; ++i) {
        char label[8];
        std::snprintf(label, sizeof(label), "h%02d", i + 1);
        const double lo = series ? 0.75 : 0.45;
        const double hi = series ? 0.95 : 0.75;
        hetero.push_back({label, lo + (hi - lo) * i / 19.0});
    }
    const double r_min = series ? 0.75 : 0.45;

    table.columns = {"epsilon"};
    for (double r : rs) {
        char col[16];
        std::snprintf(col, sizeof(col), "r%03d", static_cast<int>(std::lround(r * 100)));
        table.columns.push_back(col);
    }
    table.columns.push_back("hetero");
    if (!series) table.columns.push_back("bound");

    for (double eps = 0.50; eps <= 0.99 + 1e-9; eps += 0.01) {
        std::vector<double> row{eps};
        for (double r : rs) {
            std::vector<LabeledReliability> pool;
            for (int i = 0; i < 20; ++i) {
                char label[8];
                std::snprintf(label, sizeof(label), "u%02d", i + 1);
                pool.push_back({label, r});
            }
            const SelectionResult res =
                series ? select_series(pool, eps) : select_parallel(pool, eps);
            row.push_back(res.feasible ? static_cast<double>(res.n_star) : 0.0);
        }
        const SelectionResult h =
            series ? select_series(hetero, eps) : select_parallel(hetero, eps);
        row.push_back(h.feasible ? static_cast<double>(h.n_star) : 0.0);
        if (!series) {
            row.push_back(static_cast<double>(parallel_worst_case_bound(r_min, eps)));
        }
        table.rows.push_back(row);
    }
}

int run_sweep(const SweepArgs& a) {
    const fs::path dir = a.out.empty() ? fs::path(out_dir_default()) : fs::path(a.out);
    std::error_code ec;
    fs::create_directories(dir, ec);

    std::vector<std::string> outputs;
    try {
        if (a.name == "fig2a") {
            CurveTable table;
            sweep_triangle(builtin_scenario(a.name), a.seed, table);
            const fs::path p = dir / (a.name + ".csv");
            write_artifact(p.string(), curve_csv(table));
            outputs.push_back(p.string());
        } else if (a.name == "fig2c") {
            CurveTable table;
            sweep_demand_split(builtin_scenario(a.name), a.seed, table);
            const fs::path p = dir / (a.name + ".csv");
            write_artifact(p.string(), curve_csv(table));
            outputs.push_back(p.string());
        } else if (a.name == "fig4a") {
            CurveTable table;
            sweep_fit_overlay(builtin_scenario(a.name), a.seed, table);
            const fs::path p = dir / (a.name + ".csv");
            write_artifact(p.string(), curve_csv(table));
            outputs.push_back(p.string());
        } else if (a.name == "fig6a") {
            CurveTable table;
            sweep_convergence(builtin_scenario(a.name), a.seed, table);
            const fs::path p = dir / (a.name + ".csv");
            write_artifact(p.string(), curve_csv(table));
            outputs.push_back(p.string());
        } else if (a.name == "fig7") {
            sweep_deployment(builtin_scenario(a.name), a.seed, dir, outputs);
        } else if (a.name == "fig8a" || a.name == "fig8b") {
            CurveTable table;
            sweep_selection(a.name, table);
            const fs::path p = dir / (a.name + ".csv");
            write_artifact(p.string(), curve_csv(table));
            outputs.push_back(p.string());
        } else {
            fail(kExitSchema, "usage", "--name",
                 "unknown sweep '" + a.name +
                     "' (available: fig2a, fig2c, fig4a, fig6a, fig7, fig8a, fig8b)");
        }
    } catch (const SchemaError& e) {
        throw;
    } catch (const std::invalid_argument& e) {
        fail(kExitSchema, "input", a.name, e.what());
    } catch (const QuadratureError& e) {
        fail(kExitNumeric, "numeric", a.name, e.what());
    }

    Manifest m;
    m.subcommand = "sweep";
    m.parameters = {{"name", a.name}};
    m.seed = a.seed;
    m.outputs = outputs;
    write_artifact((dir / "manifest.json").string(), manifest_json(m));
    for (const std::string& o : outputs) std::printf("%s\n", o.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Computational reliability toolkit for volatile edge devices"};
    app.set_version_flag("--version", std::string("xedrel ") + kVersion);
    app.require_subcommand(1);

    ReliabilityArgs rel_args;
    CLI::App* rel = app.add_subcommand("reliability", "Reliability curve over a theta grid");
    add_model_flags(rel, rel_args.cap, "c", "capacity");
    add_model_flags(rel, rel_args.dem, "d", "demand");
    rel->add_option("--thetas", rel_args.thetas, "theta grid START:STOP:STEP");
    rel->add_option("--format", rel_args.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    rel->add_option("--out", rel_args.out, "output path");

    FitArgs fit_args;
    CLI::App* fit = app.add_subcommand("fit", "Fit a truncated normal to a trace");
    fit->add_option("--trace", fit_args.trace, "trace CSV (frame,value)")->required();
    fit->add_option("--bounds", fit_args.bounds, "bounds JSON sidecar")->required();
    fit->add_option("--out", fit_args.out, "output path");

    PartitionArgs part_args;
    CLI::App* part = app.add_subcommand("partition", "Optimal workload split for a pool");
    part->add_option("--pool", part_args.pool, "pool JSON")->required();
    part->add_option("--theta", part_args.theta, "QoS threshold")->required();
    part->add_option("--out", part_args.out, "output path");

    SelectArgs sel_args;
    CLI::App* sel = app.add_subcommand("select", "Device selection for a reliability target");
    sel->add_option("--mode", sel_args.mode, "series|parallel")->required();
    sel->add_option("--epsilon", sel_args.epsilon, "target system reliability")->required();
    sel->add_option("--pool", sel_args.pool, "pool JSON");
    sel->add_option("--theta", sel_args.theta, "QoS threshold for pool evaluation");
    sel->add_option("--uniform-r", sel_args.uniform_r, "synthetic pool reliability");
    sel->add_option("--pool-size", sel_args.pool_size, "synthetic pool size");
    sel->add_option("--out", sel_args.out, "output path");

    SimulateArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "Run a scenario config");
    sim->add_option("scenario", sim_args.scenario, "scenario JSON path")->required();
    std::uint64_t sim_seed = 0;
    CLI::Option* sim_seed_opt = sim->add_option("--seed", sim_seed, "override the scenario seed");
    sim->add_option("--out", sim_args.out, "output directory");

    McArgs mc_args;
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo reliability estimate");
    add_model_flags(mc, mc_args.cap, "c", "capacity");
    add_model_flags(mc, mc_args.dem, "d", "demand");
    mc->add_option("--theta", mc_args.theta, "QoS threshold")->required();
    mc->add_option("--n", mc_args.n, "trial count (>= 1000)");
    mc->add_option("--seed", mc_args.seed, "RNG seed")->required();
    mc->add_option("--out", mc_args.out, "output path");

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "Bundled end-to-end scenario sweeps");
    sweep->add_option("--name", sweep_args.name, "sweep name")->required();
    sweep->add_option("--seed", sweep_args.seed, "RNG seed")->required();
    sweep->add_option("--out", sweep_args.out, "output directory");

    try {
        app.parse(argc, argv);
        if (*sim_seed_opt) sim_args.seed = sim_seed;

        if (*rel) return run_reliability(rel_args);
        if (*fit) return run_fit(fit_args);
        if (*part) return run_partition(part_args);
        if (*sel) return run_select(sel_args);
        if (*sim) return run_simulate(sim_args);
        if (*mc) return run_mc(mc_args);
        if (*sweep) return run_sweep(sweep_args);
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help / --version
            return app.exit(e);
        }
        json j;
        j["schema"] = kSchemaVersion;
        j["error"] = {{"exit_code", kExitSchema},
                      {"kind", "usage"},
                      {"path", ""},
                      {"message", e.what()}};
        std::printf("%s\n", j.dump(2).c_str());
        return kExitSchema;
    } catch (const CliFailure& f) {
        json j;
        j["schema"] = kSchemaVersion;
        j["error"] = {{"exit_code", f.exit_code},
                      {"kind", f.kind},
                      {"path", f.path},
                      {"message", f.message}};
        std::printf("%s\n", j.dump(2).c_str());
        return f.exit_code;
    } catch (const SchemaError& e) {
        json j;
        j["schema"] = kSchemaVersion;
        j["error"] = {{"exit_code", kExitSchema},
                      {"kind", "schema"},
                      {"path", e.path()},
                      {"message", e.what()}};
        std::printf("%s\n", j.dump(2).c_str());
        return kExitSchema;
    } catch (const IoError& e) {
        const int code = e.kind() == IoError::Kind::Write ? kExitWrite : kExitSchema;
        json j;
        j["schema"] = kSchemaVersion;
        j["error"] = {{"exit_code", code},
                      {"kind", "io"},
                      {"path", e.path()},
                      {"message", e.what()}};
        std::printf("%s\n", j.dump(2).c_str());
        return code;
    } catch (const std::exception& e) {
        json j;
        j["schema"] = kSchemaVersion;
        j["error"] = {{"exit_code", kExitNumeric},
                      {"kind", "numeric"},
                      {"path", ""},
                      {"message", e.what()}};
        std::printf("%s\n", j.dump(2).c_str());
        return kExitNumeric;
    }
}
