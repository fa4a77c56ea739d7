#include "netresample/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "netresample/parallel.hpp"

namespace netresample {

SubsamplePlan SubsamplePlan::from_fraction(double alpha, std::size_t n, std::size_t replicates, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("subsample fraction must lie in (0, 1]");
    const auto size = static_cast<std::size_t>(std::llround(alpha * static_cast<double>(n)));
    return {std::max<std::size_t>(size, 1), replicates, seed};
}

void validate(const SubsamplePlan& plan, std::size_t n) {
    if (plan.subsample_size < 1 || plan.subsample_size > n)
        throw std::invalid_argument("subsample size " + std::to_string(plan.subsample_size) +
                                    " outside [1, " + std::to_string(n) + "]");
    if (plan.replicate_count < 1)
        throw std::invalid_argument("replicate count must be at least 1");
}

std::size_t ResamplingDistribution::missing_count() const {
    return static_cast<std::size_t>(
        std::count_if(replicates.begin(), replicates.end(), [](const auto& v) { return !v.has_value(); }));
}

std::vector<double> ResamplingDistribution::values() const {
    std::vector<double> out;
    out.reserve(replicates.size());
    for (const auto& v : replicates)
        if (v)
            out.push_back(*v);
    return out;
}

std::vector<NodeId> sample_nodes(std::size_t n, std::size_t m, RngStream& rng) {
    if (m < 1 || m > n)
        throw std::invalid_argument("subsample size " + std::to_string(m) + " outside [1, " + std::to_string(n) + "]");
    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(m);
    return pool;
}

Graph uniform_subsample(const Graph& g, std::size_t m, RngStream& rng) {
    const auto nodes = sample_nodes(g.node_count(), m, rng);
    return induced_subgraph(g, nodes);
}

namespace {

std::vector<ResamplingDistribution> empty_distributions(std::span<const StatKind> stats, const SubsamplePlan& plan,
                                                        const Provenance& source) {
    std::vector<ResamplingDistribution> out;
    out.reserve(stats.size());
    for (const auto& s : stats) {
        ResamplingDistribution d;
        d.statistic = s;
        d.replicates.resize(plan.replicate_count);
        d.source = source;
        d.subsample_size = plan.subsample_size;
        out.push_back(std::move(d));
    }
    return out;
}

void record(std::vector<ResamplingDistribution>& out, std::size_t replicate, const Graph& sub) {
    for (auto& d : out) {
        try {
            d.replicates[replicate] = compute_stat(sub, d.statistic);
        } catch (const std::invalid_argument&) {
            d.replicates[replicate].reset();
        }
    }
}

} // namespace

std::vector<ResamplingDistribution> resample_observed(const Graph& g, const SubsamplePlan& plan,
                                                      std::span<const StatKind> stats) {
    validate(plan, g.node_count());
    auto out = empty_distributions(stats, plan, {SourceKind::Observed, std::nullopt, plan.master_seed, g.node_count()});
    parallel_for(plan.replicate_count, [&](std::size_t i) {
        RngStream rng(plan.master_seed, i);
        record(out, i, uniform_subsample(g, plan.subsample_size, rng));
    });
    return out;
}

std::vector<ResamplingDistribution> resample_model_independent(const ModelSpec& spec, std::size_t target_n,
                                                               const SubsamplePlan& plan,
                                                               std::span<const StatKind> stats) {
    const ModelSpec sized = with_node_count(spec, target_n);
    validate(sized);
    validate(plan, target_n);
    auto out = empty_distributions(stats, plan, {SourceKind::ModelIndependentDraws, sized, plan.master_seed, target_n});
    parallel_for(plan.replicate_count, [&](std::size_t i) {
        RngStream rng(plan.master_seed, i);
        const Graph g = draw(sized, rng);
        if (plan.subsample_size > g.node_count())
            throw std::runtime_error("model draw has fewer nodes than the subsample size");
        record(out, i, uniform_subsample(g, plan.subsample_size, rng));
    });
    return out;
}

std::vector<ResamplingDistribution> resample_model_single_draw(const ModelSpec& spec, std::size_t target_n,
                                                               const SubsamplePlan& plan,
                                                               std::span<const StatKind> stats) {
    const ModelSpec sized = with_node_count(spec, target_n);
    validate(sized);
    validate(plan, target_n);
    RngStream draw_rng(plan.master_seed, kSingleDrawStream);
    const Graph g = draw(sized, draw_rng);
    validate(plan, g.node_count());
    auto out = empty_distributions(stats, plan, {SourceKind::ModelSingleDraw, sized, plan.master_seed, target_n});
    parallel_for(plan.replicate_count, [&](std::size_t i) {
        RngStream rng(plan.master_seed, i);
        record(out, i, uniform_subsample(g, plan.subsample_size, rng));
    });
    return out;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double best = 0.0;
    // Step both ECDFs past every copy of the next pooled value, then compare.
    while (i < x.size() && j < y.size()) {
        const double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == t)
            ++i;
        while (j < y.size() && y[j] == t)
            ++j;
        best = std::max(best, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    // Once one sample is exhausted its ECDF is 1 and the gap only shrinks.
    return best;
}

double kl_divergence(std::span<const double> a, std::span<const double> b, std::size_t bin_count) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("kl_divergence: empty sample");
    if (bin_count < 1)
        throw std::invalid_argument("kl_divergence: bin_count must be positive");
    double lo = a[0], hi = a[0];
    for (auto s : {a, b}) {
        for (double v : s) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    const double width = (hi - lo) / static_cast<double>(bin_count);
    auto histogram = [&](std::span<const double> s) {
        std::vector<double> counts(bin_count, 1.0);
        for (double v : s) {
            std::size_t bin = 0;
            if (width > 0.0)
                bin = std::min(bin_count - 1, static_cast<std::size_t>((v - lo) / width));
            counts[bin] += 1.0;
        }
        const double total = static_cast<double>(s.size() + bin_count);
        for (double& c : counts)
            c /= total;
        return counts;
    };
    const auto p = histogram(a);
    const auto q = histogram(b);
    double kl = 0.0;
    for (std::size_t k = 0; k < bin_count; ++k)
        kl += p[k] * std::log(p[k] / q[k]);
    return std::max(0.0, kl);
}

Summary summarize(std::span<const double> values, std::size_t missing) {
    if (values.empty())
        throw std::invalid_argument("summarize: no non-missing values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    Summary s;
    s.count = sorted.size();
    s.missing = missing;
    s.min = sorted.front();
    s.max = sorted.back();
    s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(s.count);
    if (s.count > 1) {
        double ss = 0.0;
        for (double v : sorted)
            ss += (v - s.mean) * (v - s.mean);
        s.variance = ss / static_cast<double>(s.count - 1);
    }
    s.q25 = quantile_sorted(sorted, 0.25);
    s.q50 = quantile_sorted(sorted, 0.5);
    s.q75 = quantile_sorted(sorted, 0.75);
    return s;
}

Summary summarize(const ResamplingDistribution& d) {
    return summarize(d.values(), d.missing_count());
}

} // namespace netresample
