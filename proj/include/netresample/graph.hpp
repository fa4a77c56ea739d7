#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace netresample {

using NodeId = std::uint32_t;

struct Edge {
    NodeId u;
    NodeId v;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable undirected simple graph with dense 0-based node indices.
///
/// Adjacency is stored in compressed rows; every row is sorted and free of
/// duplicates, and v appears in row u exactly when u appears in row v.
class Graph {
public:
    Graph() = default;

    std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const { return targets_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(NodeId u, NodeId v) const;

    /// Edges as (u, v) with u < v, in lexicographic order.
    std::vector<Edge> edges() const;
    std::vector<std::size_t> degrees() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    friend class GraphAssembler;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
};

/// Builds a graph from an edge list. Duplicate pairs (in either orientation)
/// collapse to one edge. Throws std::invalid_argument on a self-loop or an
/// endpoint >= node_count.
Graph build_graph(std::size_t node_count, std::span<const Edge> edges);

/// Graph on `nodes`, relabeled 0..k-1 in list order, keeping every edge of g
/// whose endpoints are both listed. Throws on duplicate or invalid indices.
Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

/// Component sizes are compared first; ties go to the component holding the
/// smallest original index. Nodes keep their relative order. Throws on an
/// empty graph.
Graph largest_connected_component(const Graph& g);

/// Same as largest_connected_component but also returns the original index of
/// each retained node.
Graph largest_connected_component(const Graph& g, std::vector<NodeId>& original_index);

/// Low-level CSR assembly shared by the builders. Rows must already satisfy
/// the Graph invariants; only sizes are checked.
class GraphAssembler {
public:
    static Graph from_sorted_rows(std::vector<std::size_t> offsets, std::vector<NodeId> targets);
};

} // namespace netresample
