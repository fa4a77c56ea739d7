#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "netresample/generators.hpp"
#include "netresample/graph.hpp"
#include "netresample/rng.hpp"
#include "netresample/statistics.hpp"

namespace netresample {

struct SubsamplePlan {
    std::size_t subsample_size = 1;
    std::size_t replicate_count = 1;
    std::uint64_t master_seed = 0;

    /// Resolves a subsample fraction alpha as round(alpha * n).
    static SubsamplePlan from_fraction(double alpha, std::size_t n, std::size_t replicates, std::uint64_t seed);
};

/// Throws std::invalid_argument unless 1 <= subsample_size <= n and
/// replicate_count >= 1.
void validate(const SubsamplePlan& plan, std::size_t n);

enum class SourceKind { Observed, ModelIndependentDraws, ModelSingleDraw };

struct Provenance {
    SourceKind kind = SourceKind::Observed;
    std::optional<ModelSpec> model;
    std::uint64_t master_seed = 0;
    std::size_t source_node_count = 0;
};

/// Replicate values of one statistic; Undefined values are kept as empty
/// entries so the replicate index is preserved.
struct ResamplingDistribution {
    StatKind statistic = StatKind::edge_count();
    std::vector<std::optional<double>> replicates;
    Provenance source;
    std::size_t subsample_size = 0;

    std::size_t replicate_count() const { return replicates.size(); }
    std::size_t missing_count() const;
    /// Non-missing values in replicate order.
    std::vector<double> values() const;
};

/// Node set of a uniform subsample: m distinct indices from [0, n) drawn
/// without replacement, in draw order (partial Fisher-Yates).
std::vector<NodeId> sample_nodes(std::size_t n, std::size_t m, RngStream& rng);

Graph uniform_subsample(const Graph& g, std::size_t m, RngStream& rng);

/// Observed resampling distribution: replicate i subsamples g on stream
/// (plan.master_seed, i). All statistics share each replicate's subsample.
std::vector<ResamplingDistribution> resample_observed(const Graph& g, const SubsamplePlan& plan,
                                                      std::span<const StatKind> stats);

/// Replicate i draws a fresh network of target_n nodes from spec and takes
/// one subsample, both on stream (plan.master_seed, i).
std::vector<ResamplingDistribution> resample_model_independent(const ModelSpec& spec, std::size_t target_n,
                                                               const SubsamplePlan& plan,
                                                               std::span<const StatKind> stats);

/// One draw on stream (plan.master_seed, kSingleDrawStream), then
/// plan.replicate_count subsamples of it on streams (plan.master_seed, i).
std::vector<ResamplingDistribution> resample_model_single_draw(const ModelSpec& spec, std::size_t target_n,
                                                               const SubsamplePlan& plan,
                                                               std::span<const StatKind> stats);

inline constexpr std::uint64_t kSingleDrawStream = 0xFFFFFFFFFFFFFFFFULL;

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|. Throws on empty input.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Discrete KL(P_a || P_b) on bin_count equal-width bins over the pooled
/// range, with one pseudo-count added to every bin of both histograms.
double kl_divergence(std::span<const double> a, std::span<const double> b, std::size_t bin_count = 20);

struct Summary {
    std::size_t count = 0;
    std::size_t missing = 0;
    double mean = 0.0;
    double variance = 0.0; // denominator count - 1; 0 for a single value
    double min = 0.0;
    double max = 0.0;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
};

Summary summarize(std::span<const double> values, std::size_t missing = 0);
/// Throws when every replicate is missing.
Summary summarize(const ResamplingDistribution& d);

} // namespace netresample
