#pragma once

#include <bit>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "netresample/graph.hpp"

namespace netresample::detail {

/// Mutable adjacency used while growing a network. Rows are dense bitsets up
/// to kDenseLimit nodes of capacity and hash sets beyond that.
class DynamicAdjacency {
public:
    static constexpr std::size_t kDenseLimit = 16384;

    explicit DynamicAdjacency(std::size_t capacity);
    DynamicAdjacency(std::size_t capacity, const Graph& initial);

    std::size_t node_count() const { return count_; }
    std::uint64_t edge_count() const { return edges_; }
    std::size_t degree(NodeId v) const { return degree_[v]; }

    NodeId add_node();
    /// Removes the most recently added node; it must have no edges.
    void pop_isolated_node();

    bool has(NodeId u, NodeId v) const;
    /// Returns false if the edge was already present.
    bool add(NodeId u, NodeId v);
    void remove(NodeId u, NodeId v);

    /// Sorted neighbor snapshot.
    std::vector<NodeId> neighbors(NodeId v) const;
    std::size_t common_neighbors(NodeId u, NodeId v) const;

    Graph to_graph() const;

private:
    bool dense() const { return words_ > 0; }
    std::uint64_t* row(NodeId v) { return bits_.data() + static_cast<std::size_t>(v) * words_; }
    const std::uint64_t* row(NodeId v) const { return bits_.data() + static_cast<std::size_t>(v) * words_; }

    std::size_t capacity_;
    std::size_t count_ = 0;
    std::uint64_t edges_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<std::unordered_set<NodeId>> sets_;
    std::vector<std::size_t> degree_;
};

} // namespace netresample::detail
