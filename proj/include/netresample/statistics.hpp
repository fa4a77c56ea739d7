#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netresample/graph.hpp"

namespace netresample {

/// A network statistic computed on (sub)graphs. Degree quartiles are limited
/// to q in {0.25, 0.5, 0.75}.
class StatKind {
public:
    enum class Kind { EdgeCount, TriangleCount, AvgLocalClustering, DegreeAssortativity, DegreeQuartile };

    static StatKind edge_count() { return StatKind(Kind::EdgeCount, 0.0); }
    static StatKind triangle_count() { return StatKind(Kind::TriangleCount, 0.0); }
    static StatKind avg_local_clustering() { return StatKind(Kind::AvgLocalClustering, 0.0); }
    static StatKind degree_assortativity() { return StatKind(Kind::DegreeAssortativity, 0.0); }
    /// Throws std::invalid_argument unless q is 0.25, 0.5 or 0.75.
    static StatKind degree_quartile(double q);

    /// Parses the canonical name ("edge_count", "degree_q25", ...).
    static StatKind parse(std::string_view name);

    Kind kind() const { return kind_; }
    double quartile() const { return q_; }
    std::string name() const;

    friend bool operator==(const StatKind&, const StatKind&) = default;

private:
    StatKind(Kind kind, double q) : kind_(kind), q_(q) {}
    Kind kind_;
    double q_;
};

/// Missing value for statistics that are undefined on a given graph.
using StatValue = std::optional<double>;

std::uint64_t triangle_count(const Graph& g);

/// Mean local clustering over all nodes; nodes of degree < 2 contribute 0.
/// Throws on an empty graph.
double avg_local_clustering(const Graph& g);

/// Pearson correlation of endpoint degrees over both orientations of every
/// edge. Empty when there are no edges or the endpoint degrees do not vary.
StatValue degree_assortativity(const Graph& g);

/// Linear interpolation between order statistics at rank (n - 1) q.
double quantile_sorted(std::span<const double> sorted, double q);

/// Degree-sequence quantiles. Throws on an empty graph or q outside [0, 1].
std::vector<double> degree_quantiles(const Graph& g, std::span<const double> probs);

StatValue compute_stat(const Graph& g, const StatKind& kind);

} // namespace netresample
