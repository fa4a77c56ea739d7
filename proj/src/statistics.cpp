#include "netresample/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace netresample {

StatKind StatKind::degree_quartile(double q) {
    if (q != 0.25 && q != 0.5 && q != 0.75)
        throw std::invalid_argument("degree quartile must be 0.25, 0.5 or 0.75");
    return StatKind(Kind::DegreeQuartile, q);
}

StatKind StatKind::parse(std::string_view name) {
    if (name == "edge_count")
        return edge_count();
    if (name == "triangle_count")
        return triangle_count();
    if (name == "avg_clustering")
        return avg_local_clustering();
    if (name == "assortativity")
        return degree_assortativity();
    if (name == "degree_q25")
        return degree_quartile(0.25);
    if (name == "degree_q50")
        return degree_quartile(0.5);
    if (name == "degree_q75")
        return degree_quartile(0.75);
    throw std::invalid_argument("unknown statistic '" + std::string(name) + "'");
}

std::string StatKind::name() const {
    switch (kind_) {
    case Kind::EdgeCount:
        return "edge_count";
    case Kind::TriangleCount:
        return "triangle_count";
    case Kind::AvgLocalClustering:
        return "avg_clustering";
    case Kind::DegreeAssortativity:
        return "assortativity";
    case Kind::DegreeQuartile:
        return q_ == 0.25 ? "degree_q25" : q_ == 0.5 ? "degree_q50" : "degree_q75";
    }
    return {};
}

namespace {

// Number of common neighbors of u and v greater than `above`.
std::uint64_t common_above(std::span<const NodeId> a, std::span<const NodeId> b, NodeId above) {
    auto ia = std::upper_bound(a.begin(), a.end(), above);
    auto ib = std::upper_bound(b.begin(), b.end(), above);
    std::uint64_t count = 0;
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

// Edges among the neighbors of v.
std::uint64_t links_among_neighbors(const Graph& g, NodeId v) {
    const auto row = g.neighbors(v);
    std::uint64_t links = 0;
    for (NodeId w : row)
        links += common_above(row, g.neighbors(w), w);
    return links;
}

} // namespace

std::uint64_t triangle_count(const Graph& g) {
    std::uint64_t total = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto row = g.neighbors(u);
        for (auto it = std::upper_bound(row.begin(), row.end(), u); it != row.end(); ++it)
            total += common_above(row, g.neighbors(*it), *it);
    }
    return total;
}

double avg_local_clustering(const Graph& g) {
    const std::size_t n = g.node_count();
    if (n == 0)
        throw std::invalid_argument("avg_local_clustering: empty graph");
    // Summed in sorted order so relabeling cannot change the rounding.
    std::vector<double> local;
    local.reserve(n);
    for (NodeId v = 0; v < n; ++v) {
        const double d = static_cast<double>(g.degree(v));
        if (d >= 2)
            local.push_back(2.0 * static_cast<double>(links_among_neighbors(g, v)) / (d * (d - 1.0)));
    }
    std::sort(local.begin(), local.end());
    double sum = 0.0;
    for (double c : local)
        sum += c;
    return sum / static_cast<double>(n);
}

StatValue degree_assortativity(const Graph& g) {
    // Both orientations of each edge are counted, so the two marginals
    // coincide and r = (P * sum(du dv) - S^2) / (P * sum(du^2) - S^2).
    // All sums are integers; 128-bit arithmetic keeps the degenerate
    // (zero-variance) case exact.
    __int128 pairs = 0, sum = 0, sum_sq = 0, cross = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto du = static_cast<__int128>(g.degree(u));
        for (NodeId v : g.neighbors(u)) {
            pairs += 1;
            sum += du;
            sum_sq += du * du;
            cross += du * static_cast<__int128>(g.degree(v));
        }
    }
    const __int128 denominator = pairs * sum_sq - sum * sum;
    if (pairs == 0 || denominator == 0)
        return std::nullopt;
    const __int128 numerator = pairs * cross - sum * sum;
    const double r = static_cast<double>(numerator) / static_cast<double>(denominator);
    return std::clamp(r, -1.0, 1.0);
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty())
        throw std::invalid_argument("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("quantile probability must lie in [0, 1]");
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<double> degree_quantiles(const Graph& g, std::span<const double> probs) {
    if (g.node_count() == 0)
        throw std::invalid_argument("degree_quantiles: empty graph");
    std::vector<double> degrees(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        degrees[v] = static_cast<double>(g.degree(v));
    std::sort(degrees.begin(), degrees.end());
    std::vector<double> out;
    out.reserve(probs.size());
    for (double q : probs)
        out.push_back(quantile_sorted(degrees, q));
    return out;
}

StatValue compute_stat(const Graph& g, const StatKind& kind) {
    switch (kind.kind()) {
    case StatKind::Kind::EdgeCount:
        return static_cast<double>(g.edge_count());
    case StatKind::Kind::TriangleCount:
        return static_cast<double>(triangle_count(g));
    case StatKind::Kind::AvgLocalClustering:
        return avg_local_clustering(g);
    case StatKind::Kind::DegreeAssortativity:
        return degree_assortativity(g);
    case StatKind::Kind::DegreeQuartile: {
        const double q = kind.quartile();
        return degree_quantiles(g, std::span<const double>(&q, 1)).front();
    }
    }
    return std::nullopt;
}

} // namespace netresample
