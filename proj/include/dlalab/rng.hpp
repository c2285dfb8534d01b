#pragma once

#include <cstdint>
#include <random>

namespace dlalab {

// SplitMix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed of the stream driving trajectory `index` under `base`. Replaying
// (base, index) reproduces the trajectory bit-exactly.
inline std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(base ^ splitmix64(index));
}

// Deterministic stream of uniform variates for one trajectory.
class UnitStream {
public:
    explicit UnitStream(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1), 53 random bits.
    double next() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform integer in [0, n), n small.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(next() * static_cast<double>(n));
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace dlalab
