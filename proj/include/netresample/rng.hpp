#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace netresample {

/// Deterministic pseudo-random stream keyed by (master seed, stream index).
///
/// State is xoshiro256** seeded through SplitMix64. All derived draws
/// (uniform reals, bounded integers, normals) are implemented here rather
/// than via <random> distributions, whose algorithms are implementation
/// defined, so a given key yields the same sequence on every platform.
class RngStream {
public:
    static constexpr std::string_view kAlgorithm = "xoshiro256starstar-splitmix64/v1";

    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform();

    /// Uniform integer on [0, bound). bound must be positive.
    std::uint64_t uniform_index(std::uint64_t bound);

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller (one variate per two uniforms).
    double normal();

    /// Number of failures before the next success of a Bernoulli(p) sequence,
    /// given log_q = log(1 - p) for 0 < p < 1.
    std::uint64_t geometric_skip(double log_q);

    std::uint64_t master_seed() const { return master_; }
    std::uint64_t stream_index() const { return stream_; }

private:
    std::array<std::uint64_t, 4> state_{};
    std::uint64_t master_;
    std::uint64_t stream_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent master seed for a sub-experiment (e.g. model i).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t tag);

} // namespace netresample
