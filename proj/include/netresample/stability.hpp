#pragma once

#include <cstdint>
#include <vector>

#include "netresample/generators.hpp"

namespace netresample {

/// Replicate degree sequences of one model and how much they disagree.
struct StabilityResult {
    std::vector<std::vector<std::size_t>> degree_sequences; // replicate -> node degrees
    double mean_pairwise_ks = 0.0;                           // over all replicate pairs
};

/// Draws `replicates` networks from spec (replicate i on stream (seed, i)) and
/// reports the mean two-sample KS distance between their degree sequences.
StabilityResult degree_stability(const ModelSpec& spec, std::size_t replicates, std::uint64_t master_seed);

} // namespace netresample
