#pragma once

#include <cstdint>
#include <random>

namespace banditreg {

// Seeded random source. The uniform/normal transforms are spelled out here
// instead of using std distributions, so a seed pins the exact draw sequence
// regardless of the standard library behind the build.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Marsaglia polar method; keeps the spare deviate across calls.
    double normal(double mean, double stddev);

    // Uniform integer on [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n) { return engine_() % n; }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// SplitMix64 mix of a master seed and a stream id, for carving independent
// deterministic streams out of one user-facing seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

} // namespace banditreg
