#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "xedrel/device.hpp"

namespace xedrel {

// Monte Carlo estimate with a 3-sigma binomial band.
struct McEstimate {
    double estimate;
    long long n_samples;
    double ci_lo;
    double ci_hi;
    std::uint64_t seed;
};

/// Fraction of n independent (capacity, demand) draws with C >= theta*D.
/// Trials run in parallel; each trial draws from its own (seed, trial)
/// stream, so the count is independent of scheduling and matches the
/// serial reference bit for bit.
McEstimate mc_single_reliability(const DeviceModel& device, QosThreshold theta, long long n,
                                 std::uint64_t seed);

/// Reference implementation: plain sequential loop, same streams.
McEstimate mc_single_reliability_serial(const DeviceModel& device, QosThreshold theta,
                                        long long n, std::uint64_t seed);

// System configurations for joint trials. Each trial draws every device's
// (capacity, demand) pair and evaluates the configuration predicate, i.e.
// composes independent per-device Bernoulli successes.
struct SeriesConfig {
    // Defaults to the shared theta when absent.
    std::optional<std::vector<double>> per_device_thetas;
};
struct ParallelConfig {};
struct PartitionedConfig {
    Allocation alloc;
};
using SystemConfiguration = std::variant<SeriesConfig, ParallelConfig, PartitionedConfig>;

McEstimate mc_system_reliability(const DevicePool& pool, const SystemConfiguration& config,
                                 QosThreshold theta, long long n, std::uint64_t seed);

McEstimate mc_system_reliability_serial(const DevicePool& pool,
                                        const SystemConfiguration& config, QosThreshold theta,
                                        long long n, std::uint64_t seed);

}  // namespace xedrel
