#include "dynamic_adjacency.hpp"

#include <algorithm>
#include <stdexcept>

namespace netresample::detail {

DynamicAdjacency::DynamicAdjacency(std::size_t capacity) : capacity_(capacity), degree_(capacity, 0) {
    if (capacity <= kDenseLimit) {
        words_ = (capacity + 63) / 64;
        bits_.assign(capacity * words_, 0);
    } else {
        sets_.resize(capacity);
    }
}

DynamicAdjacency::DynamicAdjacency(std::size_t capacity, const Graph& initial) : DynamicAdjacency(capacity) {
    if (initial.node_count() > capacity)
        throw std::invalid_argument("seed network larger than the target node count");
    for (std::size_t i = 0; i < initial.node_count(); ++i)
        add_node();
    for (const auto& e : initial.edges())
        add(e.u, e.v);
}

NodeId DynamicAdjacency::add_node() {
    if (count_ == capacity_)
        throw std::logic_error("adjacency capacity exhausted");
    return static_cast<NodeId>(count_++);
}

void DynamicAdjacency::pop_isolated_node() {
    if (count_ == 0 || degree_[count_ - 1] != 0)
        throw std::logic_error("pop_isolated_node on a connected node");
    --count_;
}

bool DynamicAdjacency::has(NodeId u, NodeId v) const {
    if (dense())
        return (row(u)[v >> 6] >> (v & 63)) & 1ULL;
    return sets_[u].contains(v);
}

bool DynamicAdjacency::add(NodeId u, NodeId v) {
    if (u == v || has(u, v))
        return false;
    if (dense()) {
        row(u)[v >> 6] |= 1ULL << (v & 63);
        row(v)[u >> 6] |= 1ULL << (u & 63);
    } else {
        sets_[u].insert(v);
        sets_[v].insert(u);
    }
    ++degree_[u];
    ++degree_[v];
    ++edges_;
    return true;
}

void DynamicAdjacency::remove(NodeId u, NodeId v) {
    if (!has(u, v))
        return;
    if (dense()) {
        row(u)[v >> 6] &= ~(1ULL << (v & 63));
        row(v)[u >> 6] &= ~(1ULL << (u & 63));
    } else {
        sets_[u].erase(v);
        sets_[v].erase(u);
    }
    --degree_[u];
    --degree_[v];
    --edges_;
}

std::vector<NodeId> DynamicAdjacency::neighbors(NodeId v) const {
    std::vector<NodeId> out;
    out.reserve(degree_[v]);
    if (dense()) {
        const std::uint64_t* r = row(v);
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t word = r[w];
            while (word) {
                out.push_back(static_cast<NodeId>(w * 64 + static_cast<std::size_t>(std::countr_zero(word))));
                word &= word - 1;
            }
        }
    } else {
        out.assign(sets_[v].begin(), sets_[v].end());
        std::sort(out.begin(), out.end());
    }
    return out;
}

std::size_t DynamicAdjacency::common_neighbors(NodeId u, NodeId v) const {
    if (dense()) {
        const std::uint64_t* a = row(u);
        const std::uint64_t* b = row(v);
        std::size_t count = 0;
        for (std::size_t w = 0; w < words_; ++w)
            count += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
        return count;
    }
    const auto& small = sets_[u].size() <= sets_[v].size() ? sets_[u] : sets_[v];
    const auto& large = sets_[u].size() <= sets_[v].size() ? sets_[v] : sets_[u];
    std::size_t count = 0;
    for (NodeId w : small)
        count += large.contains(w) ? 1 : 0;
    return count;
}

Graph DynamicAdjacency::to_graph() const {
    std::vector<std::size_t> offsets(count_ + 1, 0);
    std::vector<NodeId> targets;
    targets.reserve(2 * edges_);
    for (NodeId v = 0; v < count_; ++v) {
        const auto row_nodes = neighbors(v);
        targets.insert(targets.end(), row_nodes.begin(), row_nodes.end());
        offsets[v + 1] = targets.size();
    }
    return GraphAssembler::from_sorted_rows(std::move(offsets), std::move(targets));
}

} // namespace netresample::detail
