// Acceptance suite: end-to-end checks of the toolkit's contracts, one
// printed line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "xedrel/estimation.hpp"
#include "xedrel/io.hpp"
#include "xedrel/mcoracle.hpp"
#include "xedrel/reliability.hpp"
#include "xedrel/simharness.hpp"
#include "xedrel/system.hpp"

using namespace xedrel;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    int id;
    std::string name;
    std::function<void(std::string&)> run;  // throws or appends detail on failure
    double max_seconds = 0.0;               // 0 = no cap
};

struct Failure : std::runtime_error {
    explicit Failure(const std::string& msg) : std::runtime_error(msg) {}
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw Failure(msg);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c, d);
    return buf;
}

// Band for an n-sample binomial estimator of a known value p.
double band_at(double p, double n) {
    return 3.0 * std::sqrt(p * (1.0 - p) / n) + 1.0 / n;
}

// ---- 1: minimal-information closed form ------------------------------------

void check_mi_closed_form(std::string& detail) {
    const double fixture = reliability_mi(Bounds(60, 200), Bounds(80, 100), QosThreshold(1.0));
    require(std::fabs(fixture - 11.0 / 14.0) <= 1e-12,
            fmt("hand fixture off: %.17g vs 11/14", fixture));

    Rng rng(20260801);
    int worst_k = -1;
    double worst_margin = 1e9;
    for (int k = 0; k < 100; ++k) {
        Bounds cb(1, 2), db(1, 2);
        double theta = 1.0, r = 0.0;
        for (;;) {
            cb = testutil::random_rate_bounds(rng);
            db = testutil::random_rate_bounds(rng);
            theta = testutil::rand_log_range(rng, cb.lo / db.hi, cb.hi / db.lo);
            r = reliability_mi(cb, db, QosThreshold(theta));
            if (r > 0.02 && r < 0.98) break;
        }
        DeviceModel dev(UniformModel(cb), UniformModel(db), "mc");
        const McEstimate mc =
            mc_single_reliability(dev, QosThreshold(theta), 1'000'000, 100 + k);
        const double band = testutil::binomial_band(mc.estimate, 1e6);
        const double margin = band - std::fabs(r - mc.estimate);
        if (margin < worst_margin) {
            worst_margin = margin;
            worst_k = k;
        }
        require(std::fabs(r - mc.estimate) <= band,
                fmt("config %d outside band: |%.6f - %.6f|", k, r, mc.estimate));
    }
    detail = fmt("100 configs, tightest margin %.2e (config %g)", worst_margin, worst_k);
}

// ---- 2: historical regime ----------------------------------------------------

void check_historical(std::string& detail) {
    Rng rng(20260802);
    int checked = 0;
    while (checked < 50) {
        const TruncNormModel cap = testutil::random_truncnorm(rng);
        const TruncNormModel dem = testutil::random_truncnorm(rng);
        const double theta = testutil::rand_log_range(
            rng, cap.bounds().lo / dem.bounds().hi, cap.bounds().hi / dem.bounds().lo);
        const double r = reliability_hist(cap, dem, QosThreshold(theta));
        if (r < 0.02 || r > 0.98) continue;
        DeviceModel dev(ScalarModel{cap}, ScalarModel{dem}, "h");
        const McEstimate mc =
            mc_single_reliability(dev, QosThreshold(theta), 1'000'000, 300 + checked);
        require(std::fabs(r - mc.estimate) <=
                    testutil::binomial_band(mc.estimate, 1e6) + 1e-6,
                fmt("pair %d outside band: |%.6f - %.6f|", checked, r, mc.estimate));
        ++checked;
    }

    const Bounds cb(55, 152), db(55, 278);
    const TruncNormModel wide_cap(cb.midpoint(), 1e4 * cb.range(), cb);
    const TruncNormModel wide_dem(db.midpoint(), 1e4 * db.range(), db);
    double worst = 0.0;
    for (double theta : {1.0, 2.0, 3.0}) {
        const double gap = std::fabs(reliability_hist(wide_cap, wide_dem, QosThreshold(theta)) -
                                     reliability_mi(cb, db, QosThreshold(theta)));
        worst = std::max(worst, gap);
        require(gap <= 1e-3, fmt("large-sigma gap %.2e at theta=%.1f", gap, theta));
    }
    detail = fmt("50 pairs in band; large-sigma gap <= %.2e", worst);
}

// ---- 3: scenario triangle ----------------------------------------------------

void check_triangle(std::string& detail) {
    const Scenario s = builtin_scenario("fig2a");
    const SimResult res = run_stream_sim(s.trace, s.cost, s.profile, QosThreshold(s.theta));
    require(res.records.size() == 2590, "expected 2590 frames");
    const double blocks = std::ceil(2590.0 / s.trace.change_interval);

    const Bounds cb(s.profile.capacity_at(2), s.profile.capacity_at(6));
    const Bounds db(s.cost.demand_of_scale(0.4), s.cost.demand_of_scale(0.9));
    DeviceModel dev(UniformModel(cb), UniformModel(db), "fig2a");

    double worst = 0.0;
    for (int i = 0; i <= 12; ++i) {
        const double theta = 1.0 + 0.25 * i;
        const double p = reliability_mi(cb, db, QosThreshold(theta));
        const McEstimate mc = mc_single_reliability(dev, QosThreshold(theta), 100'000,
                                                    500 + static_cast<std::uint64_t>(i));
        long hits = 0;
        for (const FrameRecord& r : res.records) {
            if (r.capacity_gflops >= theta * r.demand_gflops) ++hits;
        }
        const double emp = static_cast<double>(hits) / 2590.0;

        const double band_mc = band_at(p, 1e5);
        const double band_emp = band_at(p, blocks);
        require(std::fabs(p - mc.estimate) <= band_mc,
                fmt("analytic-vs-mc at theta=%.2f: |%.4f - %.4f|", theta, p, mc.estimate));
        require(std::fabs(p - emp) <= band_emp,
                fmt("analytic-vs-empirical at theta=%.2f: |%.4f - %.4f|", theta, p, emp));
        require(std::fabs(mc.estimate - emp) <=
                    std::sqrt(band_mc * band_mc + band_emp * band_emp),
                fmt("mc-vs-empirical at theta=%.2f: |%.4f - %.4f|", theta, mc.estimate, emp));
        worst = std::max(worst, std::fabs(p - emp));
    }
    detail = fmt("13 thresholds, worst analytic-vs-empirical gap %.4f (%.0f blocks)", worst,
                 blocks);
}

// ---- 4: MLE convergence ------------------------------------------------------

void check_mle_convergence(std::string& detail) {
    const Scenario s = builtin_scenario("fig6a");
    const Bounds cb(s.profile.capacity_at(s.trace.thread_lo),
                    s.profile.capacity_at(s.trace.thread_hi));
    const Bounds db(s.cost.demand_of_scale(s.trace.scale_lo),
                    s.cost.demand_of_scale(s.trace.scale_hi));
    const TruncNormModel true_cap(s.trace.capacity_law.mu, s.trace.capacity_law.sigma, cb);
    const TruncNormModel true_dem(s.trace.demand_law.mu, s.trace.demand_law.sigma, db);
    const double r_true = reliability_hist(true_cap, true_dem, QosThreshold(2.5));

    const std::vector<std::size_t> ns{10, 50, 130};
    std::vector<double> mean_err(ns.size(), 0.0);
    double worst_at_130 = 0.0;
    const int seeds = 20;
    for (int seed = 0; seed < seeds; ++seed) {
        Rng c_rng(7000 + seed);
        Rng d_rng(8000 + seed);
        const auto cs = sample_n(ScalarModel{true_cap}, c_rng, 130);
        const auto ds = sample_n(ScalarModel{true_dem}, d_rng, 130);
        for (std::size_t i = 0; i < ns.size(); ++i) {
            std::vector<double> ch(cs.begin(), cs.begin() + ns[i]);
            std::vector<double> dh(ds.begin(), ds.begin() + ns[i]);
            const FitResult fc = fit_truncnorm_mle(ObservationTrace(ch, cb));
            const FitResult fd = fit_truncnorm_mle(ObservationTrace(dh, db));
            const double err =
                std::fabs(reliability_hist(fc.model, fd.model, QosThreshold(2.5)) - r_true);
            mean_err[i] += err / seeds;
            if (ns[i] == 130) worst_at_130 = std::max(worst_at_130, err);
        }
    }
    require(mean_err[0] > mean_err[1] && mean_err[1] > mean_err[2],
            fmt("mean error not decreasing: %.4f, %.4f, %.4f", mean_err[0], mean_err[1],
                mean_err[2]));
    require(worst_at_130 <= 0.05,
            fmt("estimate at n=130 off by %.4f (> 0.05) for some seed", worst_at_130));
    detail = fmt("mean err %.4f -> %.4f -> %.4f; worst seed at n=130 off by %.4f",
                 mean_err[0], mean_err[1], mean_err[2], worst_at_130);
}

// ---- 5: selection closed forms -----------------------------------------------

void check_selection(std::string& detail) {
    auto uniform_pool = [](double r) {
        std::vector<LabeledReliability> pool;
        for (int i = 0; i < 20; ++i) {
            char label[8];
            std::snprintf(label, sizeof(label), "d%02d", i + 1);
            pool.push_back({label, r});
        }
        return pool;
    };
    const std::size_t n99 = select_series(uniform_pool(0.99), 0.9).n_star;
    require(n99 == 10, fmt("series R=0.99 eps=0.9: got %g, want 10", double(n99)));
    const std::size_t n95 = select_series(uniform_pool(0.95), 0.9).n_star;
    require(n95 == 2, fmt("series R=0.95 eps=0.9: got %g, want 2", double(n95)));
    const std::size_t p90 = select_parallel(uniform_pool(0.90), 0.99).n_star;
    require(p90 == 2, fmt("parallel R=0.90 eps=0.99: got %g, want 2", double(p90)));
    detail = "N*_series(0.99)=10, N*_series(0.95)=2, N*_parallel(0.90)=2";
}

// ---- 6: partition optimality ---------------------------------------------------

void check_partition(std::string& detail) {
    for (std::size_t n : {2u, 4u, 7u}) {
        std::vector<DeviceModel> devices;
        for (std::size_t i = 0; i < n; ++i) {
            devices.emplace_back(UniformModel(Bounds(100, 200)), UniformModel(Bounds(115, 117)),
                                 "h" + std::to_string(10 + i));
        }
        const DevicePool pool(std::move(devices));
        const auto [alloc, rel] = optimize_partition(pool, QosThreshold(2.5));
        for (double a : alloc.fractions) {
            require(std::fabs(a - 1.0 / static_cast<double>(n)) <= 1e-9,
                    fmt("homogeneous N=%g: share %.12f != 1/N", double(n), a));
        }
    }

    Rng rng(20260806);
    double worst_gap = -1e9, worst_resid = 0.0;
    int checked = 0;
    while (checked < 20) {
        const Bounds ca = testutil::random_rate_bounds(rng);
        const Bounds da = testutil::random_rate_bounds(rng);
        const Bounds cb = testutil::random_rate_bounds(rng);
        const Bounds db = testutil::random_rate_bounds(rng);
        const DevicePool pool({DeviceModel(UniformModel(ca), UniformModel(da), "a"),
                               DeviceModel(UniformModel(cb), UniformModel(db), "b")});
        const double theta =
            testutil::rand_log_range(rng, 0.3, 3.0) * ca.midpoint() / da.midpoint();
        const double r_eq =
            partitioned_reliability(pool, Allocation({0.5, 0.5}), QosThreshold(theta));
        if (r_eq < 0.02 || r_eq > 0.995) continue;

        PartitionResult res{Allocation({0.5, 0.5}), 0.0};
        try {
            res = optimize_partition(pool, QosThreshold(theta));
        } catch (const PartitionInfeasible&) {
            continue;
        }
        double sweep = 0.0;
        for (int i = 1; i < 10000; ++i) {
            const double a = i * 1e-4;
            sweep = std::max(sweep, partitioned_reliability(pool, Allocation({a, 1.0 - a}),
                                                            QosThreshold(theta)));
        }
        worst_gap = std::max(worst_gap, sweep - res.reliability);
        require(res.reliability >= sweep - 1e-6,
                fmt("pool %d: solver %.8f below sweep %.8f", checked, res.reliability, sweep));
        if (res.reliability < 1.0) {
            const double resid =
                partition_stationarity_residual(pool, QosThreshold(theta), res.allocation);
            worst_resid = std::max(worst_resid, resid);
            require(resid <= 1e-6, fmt("pool %d: stationarity residual %.2e", checked, resid));
        }
        ++checked;
    }
    detail = fmt("homogeneous exact; 20 pools, worst sweep gap %.2e, worst residual %.2e",
                 worst_gap, worst_resid);
}

// ---- 7: system formulas vs joint Monte Carlo ----------------------------------

void check_system_oracle(std::string& detail) {
    Rng rng(20260807);
    int checked = 0;
    while (checked < 50) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.next_double() * 5);
        std::vector<DeviceModel> devices;
        for (std::size_t i = 0; i < n; ++i) {
            const Bounds cb = testutil::random_rate_bounds(rng);
            const Bounds db = testutil::random_rate_bounds(rng);
            ScalarModel cap = (checked + static_cast<int>(i)) % 5 == 0
                                  ? ScalarModel{TruncNormModel(cb.midpoint(), cb.range() / 3.0,
                                                               cb)}
                                  : ScalarModel{UniformModel(cb)};
            devices.emplace_back(cap, UniformModel(db), "s" + std::to_string(10 + i));
        }
        const DevicePool pool(std::move(devices));
        const Bounds& c0 = model_bounds(pool.devices[0].capacity);
        const Bounds& d0 = model_bounds(pool.devices[0].demand);
        const QosThreshold theta(c0.midpoint() / d0.midpoint());

        std::vector<double> frs(n);
        for (std::size_t i = 0; i < n; ++i) {
            frs[i] = 0.5 + rng.next_double();
        }
        double sum = 0.0;
        for (double f : frs) sum += f;
        for (double& f : frs) f /= sum;
        const Allocation alloc(frs);

        const std::vector<QosThreshold> thetas(n, theta);
        struct Case {
            const char* what;
            double analytic;
            SystemConfiguration config;
        };
        const Case cases[3] = {
            {"series", series_reliability(pool, thetas), SeriesConfig{}},
            {"parallel", parallel_reliability(pool, theta), ParallelConfig{}},
            {"partitioned", partitioned_reliability(pool, alloc, theta),
             PartitionedConfig{alloc}},
        };
        for (const Case& c : cases) {
            const McEstimate mc = mc_system_reliability(pool, c.config, theta, 1'000'000,
                                                        900 + checked);
            require(std::fabs(c.analytic - mc.estimate) <= band_at(c.analytic, 1e6),
                    fmt("pool %d ", double(checked)) + c.what +
                        fmt(": |%.6f - %.6f| outside band", c.analytic, mc.estimate));
        }
        ++checked;
    }
    detail = "50 pools x {series, parallel, partitioned} inside 3-sigma bands";
}

// ---- 8: series-deployment structure -------------------------------------------

void check_deployment(std::string& detail) {
    Scenario s = builtin_scenario("fig2a");
    s.trace.thread_lo = s.trace.thread_hi = 4;
    s.trace.n_frames = 500;
    DeploymentConfig dep;
    dep.n_workers = 4;
    dep.worker_thread_ranges = {{4, 4}, {4, 4}, {4, 4}, {4, 4}};
    dep.tau_comm_s = 0.0;
    const DeploymentReport rep = run_series_deployment(dep, s.trace, s.cost, s.profile);
    require(std::fabs(rep.speedup_vs_baseline - 4.0) <= 0.01,
            fmt("homogeneous speedup %.6f != 4.00 +- 0.01", rep.speedup_vs_baseline));

    const Scenario f7 = builtin_scenario("fig7");
    const DeploymentReport het =
        run_series_deployment(*f7.deployment, f7.trace, f7.cost, f7.profile);
    for (const WorkerFrame& wf : het.frames) {
        double worst = 0.0;
        for (double lat : wf.worker_latency_s) worst = std::max(worst, lat);
        require(wf.system_latency_s == worst, "per-frame system latency != max worker latency");
    }
    detail = fmt("speedup %.4f; system latency equals slowest worker on every frame",
                 rep.speedup_vs_baseline);
}

// ---- 9: artifact determinism ---------------------------------------------------

std::string slurp(const fs::path& p) { return read_text_file(p.string()); }

void check_determinism(std::string& detail) {
    const fs::path dir = fs::temp_directory_path() / "xedrel_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string cli = XEDREL_CLI_PATH;
    auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
        require(std::system(cmd.c_str()) == 0, "cli run failed: " + args);
    };

    // simulate
    Scenario small = builtin_scenario("fig2a");
    small.trace.n_frames = 400;
    const fs::path scen = dir / "scenario.json";
    write_text_file(scen.string(), scenario_to_json_text(small));
    const fs::path simdir = dir / "sim";
    run("simulate " + scen.string() + " --out " + simdir.string());
    const std::string sim_csv = slurp(simdir / "result.csv");
    const std::string sim_sum = slurp(simdir / "summary.json");
    const std::string sim_man = slurp(simdir / "manifest.json");
    run("simulate " + scen.string() + " --out " + simdir.string());
    require(slurp(simdir / "result.csv") == sim_csv, "simulate rerun: result.csv differs");
    require(slurp(simdir / "summary.json") == sim_sum, "simulate rerun: summary.json differs");
    require(slurp(simdir / "manifest.json") == sim_man, "simulate rerun: manifest differs");

    // mc
    const fs::path mc1 = dir / "mc.json";
    const std::string mc_flags =
        "mc --cbounds 55,152 --dbounds 55,278 --theta 2 --n 100000 --seed 7 --out ";
    run(mc_flags + mc1.string());
    const std::string mc_text = slurp(mc1);
    run(mc_flags + mc1.string());
    require(slurp(mc1) == mc_text, "mc rerun differs");

    // sweep
    const fs::path swdir = dir / "sweep";
    run("sweep --name fig2a --seed 11 --out " + swdir.string());
    const std::string sweep_csv = slurp(swdir / "fig2a.csv");
    run("sweep --name fig2a --seed 11 --out " + swdir.string());
    require(slurp(swdir / "fig2a.csv") == sweep_csv, "sweep rerun differs");

    detail = "simulate, mc, and sweep reruns byte-identical";
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Minimal-information closed form vs Monte Carlo", check_mi_closed_form, 120.0},
        {2, "Historical-regime quadrature vs Monte Carlo", check_historical, 0.0},
        {3, "Scenario consistency triangle (analytical / MC / empirical)", check_triangle,
         60.0},
        {4, "MLE reliability convergence with sample count", check_mle_convergence, 0.0},
        {5, "Device-selection closed forms", check_selection, 0.0},
        {6, "Partition optimality (homogeneous exact, sweep oracle, stationarity)",
         check_partition, 60.0},
        {7, "System formulas vs joint-trial Monte Carlo", check_system_oracle, 0.0},
        {8, "Series-deployment speedup and latency structure", check_deployment, 0.0},
        {9, "Artifact determinism from manifests", check_determinism, 0.0},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            c.run(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && c.max_seconds > 0.0 && secs > c.max_seconds) {
            ok = false;
            detail += fmt(" [exceeded %.0fs runtime cap]", c.max_seconds);
        }
        std::printf("[%d] %s  %s (%s) [%.1fs]\n", c.id, ok ? "PASS" : "FAIL", c.name.c_str(),
                    detail.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    std::printf("ACCEPTANCE: %zu/%zu criteria passed\n", criteria.size() - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
