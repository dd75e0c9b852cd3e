#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xedrel/device.hpp"
#include "xedrel/reliability.hpp"

namespace xedrel {

/// All portions mandatory: product of per-device reliabilities, one theta
/// per device.
double series_reliability(const DevicePool& pool, std::span<const QosThreshold> thetas);

/// Replicated workload: 1 - product of failure probabilities at a shared
/// theta.
double parallel_reliability(const DevicePool& pool, QosThreshold theta);

/// Workload split by fractions: product of reliabilities at the reduced
/// per-device thresholds alpha_i * theta.
double partitioned_reliability(const DevicePool& pool, const Allocation& alloc,
                               QosThreshold theta);

class PartitionInfeasible : public std::runtime_error {
public:
    explicit PartitionInfeasible(const std::string& msg) : std::runtime_error(msg) {}
};

struct PartitionResult {
    Allocation allocation;
    double reliability;
};

/// Allocation maximizing partitioned reliability. Interior optima satisfy
/// the equal marginal log-reliability condition; the solver bisects the
/// shared Lagrange multiplier, with per-device bisection on the marginal.
/// Devices saturated at reliability 1 are held at their saturation share.
/// Falls back to Nelder-Mead in softmax coordinates if the multiplier
/// search does not reach stationarity. Throws PartitionInfeasible when no
/// allocation keeps every device above zero reliability.
PartitionResult optimize_partition(const DevicePool& pool, QosThreshold theta);

/// Max pairwise spread of (dR_i/dtheta)/R_i at alpha_i*theta across
/// devices with interior allocations; 0 when fewer than two are interior.
double partition_stationarity_residual(const DevicePool& pool, QosThreshold theta,
                                       const Allocation& alloc);

struct LabeledReliability {
    std::string label;
    double reliability;
};

struct SelectionResult {
    std::size_t n_star;
    std::vector<std::string> chosen_labels;
    double achieved_reliability;
    bool feasible;
};

/// Largest N such that the product of the N best reliabilities stays at or
/// above epsilon. Candidates sort descending, ties broken by label.
/// Infeasible (n_star=0) if even the single best device misses epsilon.
SelectionResult select_series(std::vector<LabeledReliability> candidates, double epsilon);

/// Smallest N such that the product of the N best failure probabilities
/// drops to 1-epsilon or below; infeasible if all candidates together
/// still miss epsilon (the result then reports the full pool).
SelectionResult select_parallel(std::vector<LabeledReliability> candidates, double epsilon);

/// Pool wrappers: evaluate each device at theta, then select.
SelectionResult max_series_devices(const DevicePool& pool, QosThreshold theta, double epsilon);
SelectionResult min_parallel_devices(const DevicePool& pool, QosThreshold theta, double epsilon);

/// Conservative device count when only a reliability floor is known:
/// ceil(ln(1-epsilon) / ln(1-r_min)).
int parallel_worst_case_bound(double r_min, double epsilon);

}  // namespace xedrel
