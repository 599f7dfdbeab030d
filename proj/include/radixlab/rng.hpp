#pragma once

#include <cstdint>
#include <random>

#include "radixlab/rational.hpp"

namespace radixlab {

/// Per-replica random stream.
///
/// Stream r of a run with seed s is keyed by (s, r) alone, so replica results
/// do not depend on scheduling or thread count. All draws use explicit
/// algorithms (no std distributions) to keep output identical across
/// standard library implementations.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, bound); bound > 0.
    std::uint64_t uniform_below(std::uint64_t bound);
    /// Uniform on [0, 1) with 53 bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// True with probability p. Exact when the denominator fits in 64 bits.
    bool bernoulli(const Rational& p);

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace radixlab
