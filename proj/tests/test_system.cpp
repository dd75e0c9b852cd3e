#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <optional>
#include <vector>

#include "test_util.hpp"
#include "xedrel/mcoracle.hpp"
#include "xedrel/system.hpp"

using namespace xedrel;

namespace {

// Uniform-demand device inside the capacity's linear survival region:
// reliability at theta=1 is exactly (200 - d_mid)/100. The demand width
// must keep [d_mid-1, d_mid+1] inside [100, 200] (r <= 0.99).
DeviceModel device_with_reliability(double r, const std::string& label) {
    const double d_mid = 200.0 - 100.0 * r;
    return DeviceModel(UniformModel(Bounds(100, 200)),
                       UniformModel(Bounds(d_mid - 1.0, d_mid + 1.0)), label);
}

DevicePool uniform_pool(double r, std::size_t count) {
    std::vector<DeviceModel> devices;
    for (std::size_t i = 0; i < count; ++i) {
        devices.push_back(device_with_reliability(r, "d" + std::to_string(10 + i)));
    }
    return DevicePool(std::move(devices));
}

std::vector<QosThreshold> same_theta(std::size_t n, double theta) {
    return std::vector<QosThreshold>(n, QosThreshold(theta));
}

DevicePool random_mi_pool(Rng& rng, std::size_t n) {
    std::vector<DeviceModel> devices;
    for (std::size_t i = 0; i < n; ++i) {
        devices.emplace_back(UniformModel(testutil::random_rate_bounds(rng)),
                             UniformModel(testutil::random_rate_bounds(rng)),
                             "r" + std::to_string(10 + i));
    }
    return DevicePool(std::move(devices));
}

}  // namespace

TEST_CASE("series reliability is the product of the parts") {
    DevicePool pool = uniform_pool(0.84, 4);
    const double r1 = device_reliability(pool.devices[0], QosThreshold(1.0));
    CHECK(r1 == doctest::Approx(0.84).epsilon(1e-12));
    const double series = series_reliability(pool, same_theta(4, 1.0));
    CHECK(series == doctest::Approx(r1 * r1 * r1 * r1).epsilon(1e-15));
    CHECK(series == doctest::Approx(0.4979).epsilon(1e-3));

    DevicePool single = uniform_pool(0.84, 1);
    CHECK(series_reliability(single, same_theta(1, 1.0)) == r1);

    // A zero-reliability member collapses the product.
    const double dead_theta = 10.0;
    DevicePool pair(
        {device_with_reliability(0.9, "a"), device_with_reliability(0.9, "b")});
    std::vector<QosThreshold> thetas{QosThreshold(1.0), QosThreshold(dead_theta)};
    CHECK(series_reliability(pair, thetas) == 0.0);
}

TEST_CASE("parallel reliability composes failure probabilities") {
    DevicePool pool = uniform_pool(0.9, 2);
    CHECK(parallel_reliability(pool, QosThreshold(1.0)) == doctest::Approx(0.99).epsilon(1e-12));

    // A certain device makes the system certain.
    DevicePool with_sure({device_with_reliability(0.5, "a"),
                          DeviceModel(UniformModel(Bounds(100, 200)),
                                      UniformModel(Bounds(10, 20)), "sure")});
    CHECK(parallel_reliability(with_sure, QosThreshold(1.0)) == 1.0);
}

TEST_CASE("parallel analytic value sits in the joint-trial Monte Carlo band") {
    DevicePool pool({device_with_reliability(0.9, "a"), device_with_reliability(0.7, "b"),
                     device_with_reliability(0.5, "c")});
    const double analytic = parallel_reliability(pool, QosThreshold(1.0));
    const McEstimate mc = mc_system_reliability(pool, ParallelConfig{}, QosThreshold(1.0),
                                                1'000'000, 501);
    CHECK(analytic >= mc.ci_lo);
    CHECK(analytic <= mc.ci_hi);
}

TEST_CASE("partitioned reliability reduces per-device thresholds") {
    DevicePool single = uniform_pool(0.84, 1);
    Allocation all({1.0});
    CHECK(partitioned_reliability(single, all, QosThreshold(1.0)) ==
          series_reliability(single, same_theta(1, 1.0)));

    DevicePool pool = uniform_pool(0.84, 4);
    Allocation equal({0.25, 0.25, 0.25, 0.25});
    const double analytic = partitioned_reliability(pool, equal, QosThreshold(2.0));
    const McEstimate mc = mc_system_reliability(pool, PartitionedConfig{equal},
                                                QosThreshold(2.0), 1'000'000, 502);
    CHECK(analytic >= mc.ci_lo);
    CHECK(analytic <= mc.ci_hi);

    // A small enough share saturates its device at reliability 1.
    DeviceModel strong(UniformModel(Bounds(100, 200)), UniformModel(Bounds(50, 100)), "s");
    DevicePool duo({strong, device_with_reliability(0.9, "w")});
    // alpha*theta = 0.2 <= C_min/D_max = 1 for the first device.
    Allocation skew({0.1, 0.9});
    const double r_first = device_reliability(duo.devices[0], QosThreshold(0.1 * 2.0));
    CHECK(r_first == 1.0);
    CHECK(partitioned_reliability(duo, skew, QosThreshold(2.0)) ==
          device_reliability(duo.devices[1], QosThreshold(0.9 * 2.0)));
}

TEST_CASE("optimal partition of a homogeneous pool is the equal split") {
    for (std::size_t n : {2u, 4u, 7u}) {
        DevicePool pool = uniform_pool(0.84, n);
        const auto [alloc, rel] = optimize_partition(pool, QosThreshold(2.5));
        for (double a : alloc.fractions) {
            CHECK(std::fabs(a - 1.0 / static_cast<double>(n)) <= 1e-9);
        }
        const double equal_rel = partitioned_reliability(
            pool, Allocation(std::vector<double>(n, 1.0 / static_cast<double>(n))),
            QosThreshold(2.5));
        CHECK(rel >= equal_rel - 1e-12);
    }
}

TEST_CASE("flat objective returns the equal split by tie-breaking") {
    DevicePool pool = uniform_pool(0.9, 3);
    // Tiny theta: every device is saturated at the equal split.
    const auto [alloc, rel] = optimize_partition(pool, QosThreshold(0.01));
    CHECK(rel == 1.0);
    for (double a : alloc.fractions) {
        CHECK(a == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("two-device solver beats the exhaustive sweep") {
    // Heterogeneous pair with a shared demand profile.
    DevicePool pool({DeviceModel(UniformModel(Bounds(100, 200)), UniformModel(Bounds(50, 100)), "a"),
                     DeviceModel(UniformModel(Bounds(60, 120)), UniformModel(Bounds(50, 100)), "b")});
    const QosThreshold theta(2.0);
    const auto [alloc, rel] = optimize_partition(pool, theta);

    double sweep_best = 0.0;
    double sweep_alpha = 0.0;
    for (int i = 1; i < 10000; ++i) {
        const double a = i * 1e-4;
        const double r = partitioned_reliability(pool, Allocation({a, 1.0 - a}), theta);
        if (r > sweep_best) {
            sweep_best = r;
            sweep_alpha = a;
        }
    }
    INFO("sweep best ", sweep_best, " at alpha=", sweep_alpha, "; solver ", rel, " at alpha=",
         alloc.fractions[0]);
    CHECK(rel >= sweep_best - 1e-6);

    const double equal_rel =
        partitioned_reliability(pool, Allocation({0.5, 0.5}), theta);
    CHECK(rel >= equal_rel);
    // Local optimality against +-0.01 perturbations.
    for (double da : {-0.01, 0.01}) {
        const double a = alloc.fractions[0] + da;
        if (a <= 0.0 || a >= 1.0) continue;
        CHECK(rel >= partitioned_reliability(pool, Allocation({a, 1.0 - a}), theta) - 1e-9);
    }
    CHECK(partition_stationarity_residual(pool, theta, alloc) <= 1e-6);
}

TEST_CASE("random pools: solver at least matches the sweep and satisfies stationarity") {
    Rng rng(10001);
    int checked = 0;
    while (checked < 10) {
        DevicePool pool = random_mi_pool(rng, 2);
        // Pick a theta where both devices are strained but alive at the
        // equal split.
        const double r0_mid = [&] {
            const Bounds& cb = model_bounds(pool.devices[0].capacity);
            const Bounds& db = model_bounds(pool.devices[0].demand);
            return cb.midpoint() / db.midpoint();
        }();
        const double theta = 1.2 * r0_mid;
        double r_eq = partitioned_reliability(pool, Allocation({0.5, 0.5}), QosThreshold(theta));
        if (r_eq < 0.05 || r_eq > 0.995) continue;

        std::optional<PartitionResult> res;
        try {
            res = optimize_partition(pool, QosThreshold(theta));
        } catch (const PartitionInfeasible&) {
            continue;
        }
        double sweep_best = 0.0;
        for (int i = 1; i < 10000; ++i) {
            const double a = i * 1e-4;
            sweep_best = std::max(sweep_best, partitioned_reliability(
                                                  pool, Allocation({a, 1.0 - a}),
                                                  QosThreshold(theta)));
        }
        CHECK(res->reliability >= sweep_best - 1e-6);
        if (res->reliability < 1.0) {
            CHECK(partition_stationarity_residual(pool, QosThreshold(theta), res->allocation) <=
                  1e-6);
        }
        ++checked;
    }
}

TEST_CASE("devices that degrade more slowly carry larger shares") {
    Rng rng(10002);
    int checked = 0;
    while (checked < 10) {
        DevicePool pool = random_mi_pool(rng, 2);
        const double theta = [&] {
            const Bounds& cb = model_bounds(pool.devices[0].capacity);
            const Bounds& db = model_bounds(pool.devices[0].demand);
            return 1.3 * cb.midpoint() / db.midpoint();
        }();
        std::optional<PartitionResult> res;
        try {
            res = optimize_partition(pool, QosThreshold(theta));
        } catch (const PartitionInfeasible&) {
            continue;
        }
        if (res->reliability >= 1.0 || res->reliability <= 0.0) continue;

        // Compare marginal log-reliability decay at the common equal-split
        // point; skip ambiguous pools (margin under 20%).
        auto decay = [&](std::size_t i) {
            const double t = 0.5 * theta;
            const double r = device_reliability(pool.devices[i], QosThreshold(t));
            if (r <= 0.0 || r >= 1.0) return 0.0;
            return std::fabs(device_reliability_dtheta(pool.devices[i], t) / r);
        };
        const double d0 = decay(0), d1 = decay(1);
        if (d0 == 0.0 || d1 == 0.0) continue;
        if (std::fabs(d0 - d1) < 0.2 * std::max(d0, d1)) continue;
        const std::size_t gentle = d0 < d1 ? 0 : 1;
        CHECK(res->allocation.fractions[gentle] >= res->allocation.fractions[1 - gentle]);
        ++checked;
    }
}

TEST_CASE("jointly infeasible pools raise an explicit report") {
    // Each device tolerates at most ~11% of the workload; together they
    // cannot cover it.
    DevicePool pool({DeviceModel(UniformModel(Bounds(10, 11)), UniformModel(Bounds(100, 110)), "a"),
                     DeviceModel(UniformModel(Bounds(10, 11)), UniformModel(Bounds(100, 110)), "b")});
    CHECK_THROWS_AS(optimize_partition(pool, QosThreshold(1.0)), PartitionInfeasible);
}

TEST_CASE("series selection closed forms") {
    std::vector<LabeledReliability> pool99, pool95;
    for (int i = 0; i < 20; ++i) {
        pool99.push_back({"d" + std::to_string(10 + i), 0.99});
        pool95.push_back({"d" + std::to_string(10 + i), 0.95});
    }
    const SelectionResult r99 = select_series(pool99, 0.9);
    CHECK(r99.n_star == 10);
    CHECK(r99.feasible);
    CHECK(r99.chosen_labels.size() == 10);
    const SelectionResult r95 = select_series(pool95, 0.9);
    CHECK(r95.n_star == 2);

    // Device-backed route agrees.
    DevicePool devices = uniform_pool(0.99, 20);
    CHECK(max_series_devices(devices, QosThreshold(1.0), 0.9).n_star == 10);

    const SelectionResult miss = select_series({{"a", 0.8}, {"b", 0.7}}, 0.9);
    CHECK_FALSE(miss.feasible);
    CHECK(miss.n_star == 0);
    CHECK(miss.chosen_labels.empty());
}

TEST_CASE("parallel selection closed forms") {
    std::vector<LabeledReliability> pool90, pool50;
    for (int i = 0; i < 20; ++i) {
        pool90.push_back({"d" + std::to_string(10 + i), 0.90});
        pool50.push_back({"d" + std::to_string(10 + i), 0.50});
    }
    CHECK(select_parallel(pool90, 0.99).n_star == 2);
    // Closed form ceil(ln 0.01 / ln 0.5) = 7.
    CHECK(select_parallel(pool50, 0.99).n_star == 7);

    DevicePool devices = uniform_pool(0.9, 5);
    CHECK(min_parallel_devices(devices, QosThreshold(1.0), 0.99).n_star == 2);

    const SelectionResult top = select_parallel({{"a", 0.995}, {"b", 0.5}}, 0.99);
    CHECK(top.n_star == 1);
    CHECK(top.chosen_labels.front() == "a");

    const SelectionResult miss = select_parallel({{"a", 0.3}, {"b", 0.3}}, 0.999);
    CHECK_FALSE(miss.feasible);
}

TEST_CASE("worst-case parallel bound") {
    CHECK(parallel_worst_case_bound(0.9, 0.99) == 2);
    CHECK(parallel_worst_case_bound(0.5, 0.5) == 1);
    CHECK_THROWS_AS(parallel_worst_case_bound(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(parallel_worst_case_bound(0.5, 1.0), std::invalid_argument);

    Rng rng(10003);
    for (int k = 0; k < 100; ++k) {
        std::vector<LabeledReliability> pool;
        double r_min = 1.0;
        const int m = 3 + static_cast<int>(rng.next_double() * 12);
        for (int i = 0; i < m; ++i) {
            const double r = testutil::rand_range(rng, 0.2, 0.95);
            r_min = std::min(r_min, r);
            pool.push_back({"p" + std::to_string(10 + i), r});
        }
        const double eps = testutil::rand_range(rng, 0.5, 0.995);
        const SelectionResult exact = select_parallel(pool, eps);
        const int bound = parallel_worst_case_bound(r_min, eps);
        if (exact.feasible) {
            CHECK(bound >= static_cast<int>(exact.n_star));
        }
    }
}

TEST_CASE("composition inequalities and monotonicity under pool growth") {
    Rng rng(10004);
    for (int k = 0; k < 25; ++k) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.next_double() * 4);
        DevicePool pool = random_mi_pool(rng, n);
        const double theta = [&] {
            const Bounds& cb = model_bounds(pool.devices[0].capacity);
            const Bounds& db = model_bounds(pool.devices[0].demand);
            return cb.midpoint() / db.midpoint();
        }();
        std::vector<double> rs;
        for (const auto& d : pool.devices) {
            rs.push_back(device_reliability(d, QosThreshold(theta)));
        }
        const double series = series_reliability(pool, same_theta(n, theta));
        const double parallel = parallel_reliability(pool, QosThreshold(theta));
        CHECK(series <= *std::min_element(rs.begin(), rs.end()) + 1e-12);
        CHECK(parallel >= *std::max_element(rs.begin(), rs.end()) - 1e-12);

        // Growing the pool can only hurt series and help parallel.
        std::vector<DeviceModel> fewer(pool.devices.begin(), pool.devices.end() - 1);
        DevicePool sub(std::move(fewer));
        CHECK(series <= series_reliability(sub, same_theta(n - 1, theta)) + 1e-12);
        CHECK(parallel >= parallel_reliability(sub, QosThreshold(theta)) - 1e-12);
    }
}

TEST_CASE("analytic composition values sit in the Monte Carlo bands") {
    Rng rng(10005);
    int checked = 0;
    while (checked < 10) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.next_double() * 3);
        DevicePool pool = random_mi_pool(rng, n);
        const Bounds& cb = model_bounds(pool.devices[0].capacity);
        const Bounds& db = model_bounds(pool.devices[0].demand);
        const QosThreshold theta(cb.midpoint() / db.midpoint());

        const double series = series_reliability(pool, same_theta(n, theta.value()));
        if (series < 0.02 || series > 0.98) continue;
        const McEstimate mc_s =
            mc_system_reliability(pool, SeriesConfig{}, theta, 400'000, 600 + checked);
        CHECK(std::fabs(series - mc_s.estimate) <= testutil::binomial_band(mc_s.estimate, 4e5) + 1e-9);

        const double parallel = parallel_reliability(pool, theta);
        const McEstimate mc_p =
            mc_system_reliability(pool, ParallelConfig{}, theta, 400'000, 700 + checked);
        CHECK(std::fabs(parallel - mc_p.estimate) <=
              testutil::binomial_band(mc_p.estimate, 4e5) + 1e-9);
        ++checked;
    }
}
