#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace netresample {

/// G(n, p) with uniform node subsamples of m = round(alpha * n) nodes.
struct AnalyticScenario {
    std::size_t n = 0;
    double p = 0.0;
    double alpha = 0.0;
    std::size_t m = 0;

    /// Throws std::invalid_argument unless 2 <= m <= n and p lies in [0, 1].
    static AnalyticScenario make(std::size_t n, double p, double alpha);

    /// C(m, 2), dyads inside one subsample.
    double subsample_pairs() const;
    /// C(n, 2), dyads of the full graph.
    double total_pairs() const;
};

/// log C(n, k) via log-gamma; -infinity when k is outside [0, n].
double log_binomial(double n, double k);

/// Law of the number of nodes shared by two independent uniform m-subsets
/// of n nodes. Support is [max(0, 2m - n), m].
class OverlapDistribution {
public:
    OverlapDistribution(std::size_t min_overlap, std::vector<double> weights)
        : min_overlap_(min_overlap), weights_(std::move(weights)) {}

    std::size_t min_overlap() const { return min_overlap_; }
    std::size_t max_overlap() const { return min_overlap_ + weights_.size() - 1; }
    double probability(std::size_t o) const;
    const std::vector<double>& weights() const { return weights_; }

private:
    std::size_t min_overlap_;
    std::vector<double> weights_;
};

/// Weights proportional to C(n, 2m-o) C(2m-o, o) C(2m-2o, m-o), evaluated in
/// log space and normalized. Requires 1 <= m <= n.
OverlapDistribution overlap_distribution(std::size_t n, std::size_t m);

/// E[EC1 * EC2 | o shared nodes] for independent dyads with edge
/// probability p_l, where EC is the edge count of an m-node subsample.
double product_moment_a(std::size_t m, std::size_t o, double p_l);

/// cov(EC1, EC2) = sum_o A_o P(o) - (C(m, 2) p_l)^2 for two subsamples of
/// the same graph.
double cov_edge_counts(std::size_t n, std::size_t m, double p_l);
double cov_edge_counts(const OverlapDistribution& overlap, std::size_t m, double p_l);

enum class ApproxMode { Naive, Improved };

struct NormalApprox {
    double mean = 0.0;
    double variance = 1.0;
    bool degenerate() const { return !(variance > 0.0); }
};

/// Normal approximation of the subsample edge-count distribution of a single
/// graph holding l edges. Naive ignores overlap between subsamples; Improved
/// subtracts the between-subsample covariance. The variance may come out
/// nonpositive at extreme l; callers check degenerate().
NormalApprox f1_normal(const AnalyticScenario& scenario, std::uint64_t l, ApproxMode mode);
NormalApprox f1_normal(const AnalyticScenario& scenario, const OverlapDistribution& overlap, std::uint64_t l,
                       ApproxMode mode);

/// N(C(m,2) p, C(m,2) p (1 - p)), the edge count of one subsample of an
/// independent draw.
NormalApprox fc_normal(const AnalyticScenario& scenario);

/// sup_x |F(x) - G(x)| between two normal laws, attained where the densities
/// cross. Throws if either variance is not positive.
double ks_two_normals(const NormalApprox& f, const NormalApprox& g);

/// sum_l KS(F1~(l), Fc) P(|E| = l) over the central range of l whose
/// excluded binomial mass is below tail_eps.
double expected_ks(const AnalyticScenario& scenario, ApproxMode mode, double tail_eps = 1e-12);

struct McBudget {
    std::size_t outer_draws = 250;
    std::size_t inner_subsamples = 10000;
    std::size_t fc_draws = 10000;
};

struct McEstimate {
    double mean = 0.0;
    std::optional<double> standard_error; // empty with a single outer draw
    std::vector<double> per_draw_ks;
};

/// Subsample edge counts of fc_draws independent G(n, p) draws, one subsample
/// each. Draw j uses stream (derive_seed(seed, 1), j) for both the graph and
/// the node sample, consuming it exactly as gen_gnp followed by sample_nodes.
std::vector<double> mc_independent_edge_counts(const AnalyticScenario& scenario, std::size_t fc_draws,
                                               std::uint64_t seed);

/// Edge counts of `subsamples` subsamples of one G(n, p) draw. The graph uses
/// stream (derive_seed(seed, 2), draw_index); subsample k uses stream
/// (derive_seed(seed, 3 + draw_index), k).
std::vector<double> mc_single_draw_edge_counts(const AnalyticScenario& scenario, std::size_t draw_index,
                                               std::size_t subsamples, std::uint64_t seed);

/// Simulation estimate of E_G[KS(F1(G), Fc)]: Fc from budget.fc_draws
/// independent draws, F1 from budget.inner_subsamples subsamples of each of
/// budget.outer_draws draws. Returns the mean KS and its standard error.
McEstimate estimate_expected_ks_mc(const AnalyticScenario& scenario, const McBudget& budget, std::uint64_t seed);

struct GeometricMoments {
    double first = 0.0;
    double second = 0.0;
};

/// Moments of a dyad weight W with P(W = w) = p^w (1 - p). Requires 0 <= p < 1.
GeometricMoments weighted_er_moments(double p);

} // namespace netresample
