#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "xedrel/distributions.hpp"

namespace xedrel {

// Minimum acceptable capacity-to-demand ratio. For streaming inference
// this equals the target frame rate: sustaining f FPS needs C >= f * D
// per frame. Values >= 1 are the usual operating regime, but everything
// downstream only needs theta > 0, so that is what is enforced.
class QosThreshold {
public:
    explicit QosThreshold(double value) : value_(value) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw std::invalid_argument("QosThreshold: require theta > 0, got " +
                                        std::to_string(value));
        }
    }
    double value() const { return value_; }

private:
    double value_;
};

// One device: its capacity model paired with the demand model it faces.
// Capacity and demand are independent by construction (separate marginals,
// separate draws). Bounds must be positive rates.
struct DeviceModel {
    ScalarModel capacity;
    ScalarModel demand;
    std::string label;

    DeviceModel(ScalarModel capacity_, ScalarModel demand_, std::string label_)
        : capacity(std::move(capacity_)), demand(std::move(demand_)), label(std::move(label_)) {
        validate_rate_bounds(model_bounds(capacity), "DeviceModel(" + label + ") capacity");
        validate_rate_bounds(model_bounds(demand), "DeviceModel(" + label + ") demand");
        if (label.empty()) {
            throw std::invalid_argument("DeviceModel: label must be nonempty");
        }
    }
};

// Ordered pool of devices with unique labels. Device successes are
// treated as statistically independent throughout.
struct DevicePool {
    std::vector<DeviceModel> devices;

    explicit DevicePool(std::vector<DeviceModel> devices_) : devices(std::move(devices_)) {
        if (devices.empty()) {
            throw std::invalid_argument("DevicePool: must contain at least one device");
        }
        for (std::size_t i = 0; i < devices.size(); ++i) {
            for (std::size_t j = i + 1; j < devices.size(); ++j) {
                if (devices[i].label == devices[j].label) {
                    throw std::invalid_argument("DevicePool: duplicate label '" +
                                                devices[i].label + "'");
                }
            }
        }
    }

    std::size_t size() const { return devices.size(); }
};

// Workload fractions aligned with a pool's device order.
struct Allocation {
    std::vector<double> fractions;

    explicit Allocation(std::vector<double> fractions_) : fractions(std::move(fractions_)) {
        if (fractions.empty()) {
            throw std::invalid_argument("Allocation: must be nonempty");
        }
        double sum = 0.0;
        for (double a : fractions) {
            if (!(a > 0.0) || !std::isfinite(a)) {
                throw std::invalid_argument("Allocation: every fraction must be > 0");
            }
            sum += a;
        }
        if (std::fabs(sum - 1.0) > 1e-12) {
            throw std::invalid_argument("Allocation: fractions sum to " + std::to_string(sum) +
                                        ", expected 1 within 1e-12");
        }
    }
};

}  // namespace xedrel
