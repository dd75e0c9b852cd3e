#pragma once

#include <cstdint>

namespace xedrel {

// SplitMix64 (Steele, Lea & Flood, "Fast splittable pseudorandom number
// generators", OOPSLA 2014). One 64-bit state word, a fixed odd increment
// and an avalanche finalizer. Picked because streams are reproducible
// bit-for-bit on every platform, which keeps CSV fixtures stable, and
// because independent streams can be derived from (seed, key) pairs so
// Monte Carlo trials can be evaluated in any order, serial or parallel,
// with identical results.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Avalanche finalizer used both for output and for stream derivation.
    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Independent stream for a derived unit of work (trial index, worker
    // lane, ...). Same (seed, key) always yields the same stream.
    static Rng stream(std::uint64_t seed, std::uint64_t key) {
        return Rng(mix64(seed + kGamma * (key + 1)));
    }

    std::uint64_t next_u64() {
        state_ += kGamma;
        return mix64(state_);
    }

    // Uniform double in [0, 1), 53 random mantissa bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Child generator decorrelated from the parent's continuation.
    Rng split() {
        return Rng(mix64(next_u64() ^ 0x3C79AC492BA7B653ULL));
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    std::uint64_t state_;
};

}  // namespace xedrel
