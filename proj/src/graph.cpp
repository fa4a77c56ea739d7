#include "netresample/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace netresample {

namespace {

constexpr NodeId kUnmapped = static_cast<NodeId>(-1);

// Sorts and deduplicates each row in place, then compacts the CSR arrays.
Graph finalize_rows(std::vector<std::size_t> offsets, std::vector<NodeId> targets) {
    const std::size_t n = offsets.size() - 1;
    std::size_t write = 0;
    std::size_t row_begin = offsets[0];
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t row_end = offsets[v + 1];
        auto first = targets.begin() + static_cast<std::ptrdiff_t>(row_begin);
        auto last = targets.begin() + static_cast<std::ptrdiff_t>(row_end);
        std::sort(first, last);
        last = std::unique(first, last);
        offsets[v] = write;
        for (auto it = first; it != last; ++it)
            targets[write++] = *it;
        row_begin = row_end;
    }
    offsets[n] = write;
    targets.resize(write);
    return GraphAssembler::from_sorted_rows(std::move(offsets), std::move(targets));
}

} // namespace

Graph GraphAssembler::from_sorted_rows(std::vector<std::size_t> offsets, std::vector<NodeId> targets) {
    if (offsets.empty() || offsets.back() != targets.size())
        throw std::invalid_argument("malformed adjacency rows");
    Graph g;
    g.offsets_ = std::move(offsets);
    g.targets_ = std::move(targets);
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    if (degree(u) > degree(v))
        std::swap(u, v);
    const auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
        for (NodeId v : neighbors(u))
            if (u < v)
                out.push_back({u, v});
    return out;
}

std::vector<std::size_t> Graph::degrees() const {
    std::vector<std::size_t> out(node_count());
    for (NodeId v = 0; v < node_count(); ++v)
        out[v] = degree(v);
    return out;
}

Graph build_graph(std::size_t node_count, std::span<const Edge> edges) {
    std::vector<std::size_t> offsets(node_count + 1, 0);
    for (const auto& e : edges) {
        if (e.u >= node_count || e.v >= node_count)
            throw std::invalid_argument("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                        ") references a node outside [0, " + std::to_string(node_count) + ")");
        if (e.u == e.v)
            throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
        ++offsets[e.u + 1];
        ++offsets[e.v + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<NodeId> targets(offsets.back());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& e : edges) {
        targets[cursor[e.u]++] = e.v;
        targets[cursor[e.v]++] = e.u;
    }
    return finalize_rows(std::move(offsets), std::move(targets));
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
    const std::size_t n = g.node_count();
    std::vector<NodeId> relabel(n, kUnmapped);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const NodeId v = nodes[i];
        if (v >= n)
            throw std::invalid_argument("induced_subgraph: node " + std::to_string(v) + " out of range");
        if (relabel[v] != kUnmapped)
            throw std::invalid_argument("induced_subgraph: node " + std::to_string(v) + " listed twice");
        relabel[v] = static_cast<NodeId>(i);
    }

    std::vector<std::size_t> offsets(nodes.size() + 1, 0);
    std::vector<NodeId> targets;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (NodeId w : g.neighbors(nodes[i]))
            if (relabel[w] != kUnmapped)
                targets.push_back(relabel[w]);
        offsets[i + 1] = targets.size();
        std::sort(targets.begin() + static_cast<std::ptrdiff_t>(offsets[i]), targets.end());
    }
    return GraphAssembler::from_sorted_rows(std::move(offsets), std::move(targets));
}

Graph largest_connected_component(const Graph& g, std::vector<NodeId>& original_index) {
    const std::size_t n = g.node_count();
    if (n == 0)
        throw std::invalid_argument("largest_connected_component: empty graph");

    std::vector<NodeId> component(n, kUnmapped);
    std::vector<NodeId> stack;
    NodeId best_root = 0;
    std::size_t best_size = 0;
    // Roots are visited in increasing index order, so a strict comparison
    // keeps the component with the smallest minimum index on ties.
    for (NodeId root = 0; root < n; ++root) {
        if (component[root] != kUnmapped)
            continue;
        std::size_t size = 0;
        component[root] = root;
        stack.push_back(root);
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            ++size;
            for (NodeId w : g.neighbors(v)) {
                if (component[w] == kUnmapped) {
                    component[w] = root;
                    stack.push_back(w);
                }
            }
        }
        if (size > best_size) {
            best_size = size;
            best_root = root;
        }
    }

    original_index.clear();
    for (NodeId v = 0; v < n; ++v)
        if (component[v] == best_root)
            original_index.push_back(v);
    return induced_subgraph(g, original_index);
}

Graph largest_connected_component(const Graph& g) {
    std::vector<NodeId> unused;
    return largest_connected_component(g, unused);
}

} // namespace netresample
