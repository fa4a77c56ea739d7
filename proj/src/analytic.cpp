#include "netresample/analytic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "netresample/generators.hpp"
#include "netresample/parallel.hpp"
#include "netresample/resampling.hpp"
#include "netresample/rng.hpp"

namespace netresample {

namespace {

double pairs_of(double k) { return k * (k - 1.0) / 2.0; }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

constexpr double kVarianceFloor = 1e-12;

} // namespace

AnalyticScenario AnalyticScenario::make(std::size_t n, double p, double alpha) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("scenario: p must lie in [0, 1]");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("scenario: alpha must lie in (0, 1]");
    const auto m = static_cast<std::size_t>(std::llround(alpha * static_cast<double>(n)));
    if (m < 2 || m > n)
        throw std::invalid_argument("scenario: subsample size round(alpha n) = " + std::to_string(m) +
                                    " outside [2, n]");
    return {n, p, alpha, m};
}

double AnalyticScenario::subsample_pairs() const { return pairs_of(static_cast<double>(m)); }
double AnalyticScenario::total_pairs() const { return pairs_of(static_cast<double>(n)); }

double log_binomial(double n, double k) {
    if (k < 0.0 || k > n)
        return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double OverlapDistribution::probability(std::size_t o) const {
    if (o < min_overlap_ || o > max_overlap())
        return 0.0;
    return weights_[o - min_overlap_];
}

OverlapDistribution overlap_distribution(std::size_t n, std::size_t m) {
    if (m < 1 || m > n)
        throw std::invalid_argument("overlap_distribution: need 1 <= m <= n");
    const std::size_t lo = 2 * m > n ? 2 * m - n : 0;
    const auto dn = static_cast<double>(n), dm = static_cast<double>(m);
    std::vector<double> log_w;
    log_w.reserve(m - lo + 1);
    for (std::size_t o = lo; o <= m; ++o) {
        const auto d_o = static_cast<double>(o);
        log_w.push_back(log_binomial(dn, 2 * dm - d_o) + log_binomial(2 * dm - d_o, d_o) +
                        log_binomial(2 * dm - 2 * d_o, dm - d_o));
    }
    const double top = *std::max_element(log_w.begin(), log_w.end());
    std::vector<double> w(log_w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = std::exp(log_w[i] - top);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w)
        x /= total;
    return {lo, std::move(w)};
}

double product_moment_a(std::size_t m, std::size_t o, double p_l) {
    const double ms = pairs_of(static_cast<double>(m));
    const double os = pairs_of(static_cast<double>(o));
    const double p2 = p_l * p_l;
    return os * p_l + 2.0 * pairs_of(os) * p2 + 2.0 * (ms - os) * os * p2 + (ms - os) * (ms - os) * p2;
}

double cov_edge_counts(const OverlapDistribution& overlap, std::size_t m, double p_l) {
    double cross = 0.0;
    for (std::size_t o = overlap.min_overlap(); o <= overlap.max_overlap(); ++o)
        cross += product_moment_a(m, o, p_l) * overlap.probability(o);
    const double mean = pairs_of(static_cast<double>(m)) * p_l;
    return cross - mean * mean;
}

double cov_edge_counts(std::size_t n, std::size_t m, double p_l) {
    if (m < 2 || m > n)
        throw std::invalid_argument("cov_edge_counts: need 2 <= m <= n");
    return cov_edge_counts(overlap_distribution(n, m), m, p_l);
}

NormalApprox f1_normal(const AnalyticScenario& scenario, const OverlapDistribution& overlap, std::uint64_t l,
                       ApproxMode mode) {
    const double total = scenario.total_pairs();
    if (static_cast<double>(l) > total)
        throw std::invalid_argument("f1_normal: l exceeds C(n, 2)");
    const double p_l = static_cast<double>(l) / total;
    const double ms = scenario.subsample_pairs();
    const double mean = ms * p_l;
    if (mode == ApproxMode::Naive)
        return {mean, ms * p_l * (1.0 - p_l)};
    const double second_moment = ms * p_l + ms * (ms - 1.0) * p_l * p_l;
    return {mean, second_moment - mean * mean - cov_edge_counts(overlap, scenario.m, p_l)};
}

NormalApprox f1_normal(const AnalyticScenario& scenario, std::uint64_t l, ApproxMode mode) {
    return f1_normal(scenario, overlap_distribution(scenario.n, scenario.m), l, mode);
}

NormalApprox fc_normal(const AnalyticScenario& scenario) {
    const double ms = scenario.subsample_pairs();
    return {ms * scenario.p, ms * scenario.p * (1.0 - scenario.p)};
}

double ks_two_normals(const NormalApprox& f, const NormalApprox& g) {
    if (f.degenerate() || g.degenerate())
        throw std::invalid_argument("ks_two_normals: variances must be positive");
    // Work relative to g's mean: y = x - g.mean.
    const double shift = f.mean - g.mean;
    const double sf = std::sqrt(f.variance), sg = std::sqrt(g.variance);
    auto gap = [&](double y) { return std::abs(normal_cdf((y - shift) / sf) - normal_cdf(y / sg)); };

    if (shift == 0.0 && f.variance == g.variance)
        return 0.0;
    // Densities cross where a y^2 + b y + c = 0.
    const double a = 1.0 / f.variance - 1.0 / g.variance;
    const double b = -2.0 * shift / f.variance;
    const double c = shift * shift / f.variance + std::log(f.variance / g.variance);
    if (a == 0.0)
        return gap(shift / 2.0);
    const double disc = std::max(0.0, b * b - 4.0 * a * c);
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    double best = 0.0;
    if (q != 0.0) {
        best = std::max(best, gap(q / a));
        best = std::max(best, gap(c / q));
    } else {
        best = gap(0.0);
    }
    return std::min(1.0, best);
}

double expected_ks(const AnalyticScenario& scenario, ApproxMode mode, double tail_eps) {
    if (!(tail_eps > 0.0 && tail_eps < 1.0))
        throw std::invalid_argument("expected_ks: tail_eps must lie in (0, 1)");
    const double total = scenario.total_pairs();
    const auto total_l = static_cast<std::uint64_t>(total);
    const double p = scenario.p;
    const NormalApprox fc = fc_normal(scenario);
    if (fc.degenerate())
        return 0.0; // p in {0, 1}: every graph is the same graph
    const OverlapDistribution overlap = overlap_distribution(scenario.n, scenario.m);

    const double log_norm = std::lgamma(total + 1.0);
    const double log_p = std::log(p), log_q = std::log1p(-p);
    auto pmf = [&](std::uint64_t l) {
        const auto dl = static_cast<double>(l);
        return std::exp(log_norm - std::lgamma(dl + 1.0) - std::lgamma(total - dl + 1.0) + dl * log_p +
                        (total - dl) * log_q);
    };
    auto term = [&](std::uint64_t l) {
        NormalApprox f1 = f1_normal(scenario, overlap, l, mode);
        f1.variance = std::max(f1.variance, kVarianceFloor);
        return ks_two_normals(f1, fc) * pmf(l);
    };

    // Start at the mode and extend each side until the remaining tail, bounded
    // by a geometric series in the (monotone) pmf ratio, is below tail_eps / 2.
    const auto mode_l = std::min<std::uint64_t>(total_l, static_cast<std::uint64_t>(std::floor((total + 1.0) * p)));
    double sum = term(mode_l);
    for (std::uint64_t l = mode_l; l < total_l; ++l) {
        const auto dl = static_cast<double>(l);
        const double ratio = (total - dl) * p / ((dl + 1.0) * (1.0 - p));
        if (ratio < 1.0 && pmf(l) * ratio / (1.0 - ratio) < tail_eps / 2.0)
            break;
        sum += term(l + 1);
    }
    for (std::uint64_t l = mode_l; l > 0; --l) {
        const auto dl = static_cast<double>(l);
        const double ratio = dl * (1.0 - p) / ((total - dl + 1.0) * p);
        if (ratio < 1.0 && pmf(l) * ratio / (1.0 - ratio) < tail_eps / 2.0)
            break;
        sum += term(l - 1);
    }
    return sum;
}

namespace {

// Dense bit adjacency of one G(n, p) draw, for fast subsample edge counts.
class BitGraph {
public:
    BitGraph(std::size_t n, double p, RngStream& rng) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {
        for_each_gnp_edge(n, p, rng, [this](NodeId u, NodeId v) {
            bits_[u * words_ + (v >> 6)] |= 1ULL << (v & 63);
            bits_[v * words_ + (u >> 6)] |= 1ULL << (u & 63);
        });
    }

    std::uint64_t induced_edges(const std::vector<NodeId>& nodes, std::vector<std::uint64_t>& mask) const {
        mask.assign(words_, 0);
        for (NodeId v : nodes)
            mask[v >> 6] |= 1ULL << (v & 63);
        std::uint64_t twice = 0;
        for (NodeId v : nodes) {
            const std::uint64_t* row = bits_.data() + static_cast<std::size_t>(v) * words_;
            for (std::size_t w = 0; w < words_; ++w)
                twice += static_cast<std::uint64_t>(std::popcount(row[w] & mask[w]));
        }
        return twice / 2;
    }

    std::size_t node_count() const { return n_; }

private:
    std::size_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

} // namespace

std::vector<double> mc_independent_edge_counts(const AnalyticScenario& scenario, std::size_t fc_draws,
                                               std::uint64_t seed) {
    std::vector<double> counts(fc_draws);
    const std::uint64_t fc_seed = derive_seed(seed, 1);
    parallel_for(fc_draws, [&](std::size_t j) {
        RngStream rng(fc_seed, j);
        const BitGraph g(scenario.n, scenario.p, rng);
        std::vector<std::uint64_t> mask;
        counts[j] = static_cast<double>(g.induced_edges(sample_nodes(scenario.n, scenario.m, rng), mask));
    });
    return counts;
}

std::vector<double> mc_single_draw_edge_counts(const AnalyticScenario& scenario, std::size_t draw_index,
                                               std::size_t subsamples, std::uint64_t seed) {
    RngStream graph_rng(derive_seed(seed, 2), draw_index);
    const BitGraph g(scenario.n, scenario.p, graph_rng);
    const std::uint64_t sub_seed = derive_seed(seed, 3 + draw_index);
    std::vector<double> counts(subsamples);
    std::vector<std::uint64_t> mask;
    for (std::size_t k = 0; k < subsamples; ++k) {
        RngStream rng(sub_seed, k);
        counts[k] = static_cast<double>(g.induced_edges(sample_nodes(scenario.n, scenario.m, rng), mask));
    }
    return counts;
}

McEstimate estimate_expected_ks_mc(const AnalyticScenario& scenario, const McBudget& budget, std::uint64_t seed) {
    if (budget.outer_draws < 1 || budget.inner_subsamples < 1 || budget.fc_draws < 1)
        throw std::invalid_argument("estimate_expected_ks_mc: all counts must be at least 1");
    const auto fc = mc_independent_edge_counts(scenario, budget.fc_draws, seed);
    McEstimate out;
    out.per_draw_ks.resize(budget.outer_draws);
    parallel_for(budget.outer_draws, [&](std::size_t i) {
        const auto f1 = mc_single_draw_edge_counts(scenario, i, budget.inner_subsamples, seed);
        out.per_draw_ks[i] = ks_two_sample(f1, fc);
    });
    const auto k = static_cast<double>(budget.outer_draws);
    out.mean = std::accumulate(out.per_draw_ks.begin(), out.per_draw_ks.end(), 0.0) / k;
    if (budget.outer_draws > 1) {
        double ss = 0.0;
        for (double v : out.per_draw_ks)
            ss += (v - out.mean) * (v - out.mean);
        out.standard_error = std::sqrt(ss / (k - 1.0) / k);
    }
    return out;
}

GeometricMoments weighted_er_moments(double p) {
    if (!(p >= 0.0 && p < 1.0))
        throw std::invalid_argument("weighted_er_moments: p must lie in [0, 1)");
    const double q = 1.0 - p;
    return {p / q, (p + p * p) / (q * q)};
}

} // namespace netresample
