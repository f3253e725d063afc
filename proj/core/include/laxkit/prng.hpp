#pragma once

#include <cstdint>

namespace laxkit {

/// splitmix64 recurrence; fixed across platforms so seeded sample sweeps
/// are reproducible bit for bit.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Derive an independent stream (split).
    SplitMix64 split() { return SplitMix64(next_u64()); }

private:
    std::uint64_t state_;
};

}  // namespace laxkit
