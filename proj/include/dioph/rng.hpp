#pragma once

#include <cstdint>

namespace dioph {

// Counter-based generator: sample i of stream s is a pure function of
// (seed, s, i), so parallel partitions of the index range produce the same
// numbers regardless of schedule. Mixing is the SplitMix64 finalizer
// applied to a Weyl-sequence input.
class CounterRng {
public:
    CounterRng(uint64_t seed, uint64_t stream = 0) : seed_(seed), stream_(stream) {}

    uint64_t bits(uint64_t index) const {
        uint64_t z = seed_ + 0x9E3779B97F4A7C15ULL * (index + 1) +
                     0xBF58476D1CE4E5B9ULL * (stream_ + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 significant bits (an exact dyadic rational).
    double uniform(uint64_t index) const {
        return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
    }

    // Uniform in [-1,1).
    double uniform_sym(uint64_t index) const { return 2.0 * uniform(index) - 1.0; }

    // Uniform integer in [0, n).
    uint64_t below(uint64_t index, uint64_t n) const { return bits(index) % n; }

    CounterRng substream(uint64_t s) const { return CounterRng(seed_, stream_ ^ (s * 0x9E3779B97F4A7C15ULL + s + 1)); }

private:
    uint64_t seed_;
    uint64_t stream_;
};

} // namespace dioph
