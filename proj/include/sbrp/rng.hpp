#pragma once

#include <cstdint>
#include <random>

namespace sbrp {

// All randomness flows through this wrapper. The mt19937_64 engine is
// bit-exact per the C++ standard; the std::*_distribution adapters are not,
// so the distributions below are implemented by hand to keep seeded runs
// reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform draw in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via the Marsaglia polar method (second value cached).
    double normal();

    /// Gamma(shape, 1) via Marsaglia-Tsang, with the shape<1 boost.
    double gamma(double shape);

    /// Beta(a, b) as the usual gamma ratio.
    double beta(double a, double b);

private:
    std::mt19937_64 engine_;
    bool has_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

/// Derives an independent stream seed from a base seed and a stream index
/// (splitmix64 finalizer); used for per-replica RNG streams.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace sbrp
