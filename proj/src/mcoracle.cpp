#include "xedrel/mcoracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "xedrel/rng.hpp"

namespace xedrel {

namespace {

void require_n(long long n) {
    if (n < 1000) {
        throw std::invalid_argument("Monte Carlo estimate needs n >= 1000, got " +
                                    std::to_string(n));
    }
}

McEstimate finish(long long hits, long long n, std::uint64_t seed) {
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    const double half = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return McEstimate{p, n, std::max(0.0, p - half), std::min(1.0, p + half), seed};
}

inline bool single_trial(const DeviceModel& device, double theta, std::uint64_t seed,
                         long long trial) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(trial));
    const double c = model_sample(device.capacity, rng);
    const double d = model_sample(device.demand, rng);
    return c >= theta * d;
}

// Per-trial predicate over the whole pool; draws devices in pool order
// (capacity then demand) from the trial's stream.
struct SystemPredicate {
    const DevicePool& pool;
    // Effective threshold per device under the configuration; parallel
    // short-circuits differently so it carries a flag.
    std::vector<double> eff_theta;
    bool any_success;  // parallel: any device meeting theta counts

    bool operator()(Rng& rng) const {
        bool all = true;
        bool any = false;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            const double c = model_sample(pool.devices[i].capacity, rng);
            const double d = model_sample(pool.devices[i].demand, rng);
            const bool ok = c >= eff_theta[i] * d;
            all = all && ok;
            any = any || ok;
        }
        return any_success ? any : all;
    }
};

SystemPredicate make_predicate(const DevicePool& pool, const SystemConfiguration& config,
                               double theta) {
    SystemPredicate pred{pool, std::vector<double>(pool.size(), theta), false};
    if (const auto* series = std::get_if<SeriesConfig>(&config)) {
        if (series->per_device_thetas) {
            if (series->per_device_thetas->size() != pool.size()) {
                throw std::invalid_argument("mc_system_reliability: theta/pool size mismatch");
            }
            pred.eff_theta = *series->per_device_thetas;
        }
    } else if (const auto* part = std::get_if<PartitionedConfig>(&config)) {
        if (part->alloc.fractions.size() != pool.size()) {
            throw std::invalid_argument("mc_system_reliability: allocation/pool size mismatch");
        }
        for (std::size_t i = 0; i < pool.size(); ++i) {
            pred.eff_theta[i] = part->alloc.fractions[i] * theta;
        }
    } else {
        pred.any_success = true;
    }
    return pred;
}

}  // namespace

McEstimate mc_single_reliability(const DeviceModel& device, QosThreshold theta, long long n,
                                 std::uint64_t seed) {
    require_n(n);
    const double th = theta.value();
    long long hits = 0;
#pragma omp parallel for reduction(+ : hits) schedule(static)
    for (long long t = 0; t < n; ++t) {
        if (single_trial(device, th, seed, t)) ++hits;
    }
    return finish(hits, n, seed);
}

McEstimate mc_single_reliability_serial(const DeviceModel& device, QosThreshold theta,
                                        long long n, std::uint64_t seed) {
    require_n(n);
    const double th = theta.value();
    long long hits = 0;
    for (long long t = 0; t < n; ++t) {
        if (single_trial(device, th, seed, t)) ++hits;
    }
    return finish(hits, n, seed);
}

McEstimate mc_system_reliability(const DevicePool& pool, const SystemConfiguration& config,
                                 QosThreshold theta, long long n, std::uint64_t seed) {
    require_n(n);
    const SystemPredicate pred = make_predicate(pool, config, theta.value());
    long long hits = 0;
#pragma omp parallel for reduction(+ : hits) schedule(static)
    for (long long t = 0; t < n; ++t) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
        if (pred(rng)) ++hits;
    }
    return finish(hits, n, seed);
}

McEstimate mc_system_reliability_serial(const DevicePool& pool,
                                        const SystemConfiguration& config, QosThreshold theta,
                                        long long n, std::uint64_t seed) {
    require_n(n);
    const SystemPredicate pred = make_predicate(pool, config, theta.value());
    long long hits = 0;
    for (long long t = 0; t < n; ++t) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
        if (pred(rng)) ++hits;
    }
    return finish(hits, n, seed);
}

}  // namespace xedrel
