#include "netresample/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "dynamic_adjacency.hpp"

namespace netresample {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& message) {
    if (!ok)
        throw std::invalid_argument(message);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

std::uint64_t dyad_count(std::size_t n) {
    return static_cast<std::uint64_t>(n) * (n == 0 ? 0 : n - 1) / 2;
}

// Maps a dyad index in [0, C(n,2)) to (v, w), w < v, rows ordered by v.
Edge decode_dyad(std::uint64_t index) {
    auto v = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(index))) / 2.0);
    while (v * (v - 1) / 2 > index)
        --v;
    while ((v + 1) * v / 2 <= index)
        ++v;
    return {static_cast<NodeId>(v), static_cast<NodeId>(index - v * (v - 1) / 2)};
}

// Visits each x in [0, count) independently with probability p.
template <class Fn>
void bernoulli_subset(std::size_t count, double p, RngStream& rng, Fn&& visit) {
    if (p <= 0.0 || count == 0)
        return;
    if (p >= 1.0) {
        for (std::size_t x = 0; x < count; ++x)
            visit(static_cast<NodeId>(x));
        return;
    }
    const double log_q = std::log1p(-p);
    std::uint64_t x = rng.geometric_skip(log_q);
    while (x < count) {
        visit(static_cast<NodeId>(x));
        const std::uint64_t skip = rng.geometric_skip(log_q);
        if (skip >= count)
            break;
        x += skip + 1;
    }
}

void check_seed_fits(const Graph& seed, std::size_t n) {
    require(seed.node_count() <= n, "seed network has " + std::to_string(seed.node_count()) +
                                        " nodes, more than the target " + std::to_string(n));
}

} // namespace

std::size_t seed_node_count(const SeedSpec& seed) {
    return std::visit(overloaded{
                          [](const CompleteSeed& s) { return s.k; },
                          [](const HormozdiariSeed&) { return std::size_t{50}; },
                          [](const InverseGeometricSeed& s) { return s.n; },
                          [](const ExplicitSeed& s) { return s.graph.node_count(); },
                      },
                      seed);
}

std::string model_name(const ModelSpec& spec) {
    return std::visit(overloaded{
                          [](const GnpBatch&) { return std::string("gnp"); },
                          [](const GnpGrown&) { return std::string("gnp_grown"); },
                          [](const Gnm&) { return std::string("gnm"); },
                          [](const Triadic&) { return std::string("triadic"); },
                          [](const Dmc&) { return std::string("dmc"); },
                          [](const Dmr&) { return std::string("dmr"); },
                      },
                      spec);
}

std::size_t target_node_count(const ModelSpec& spec) {
    return std::visit([](const auto& s) { return s.n; }, spec);
}

ModelSpec with_node_count(ModelSpec spec, std::size_t n) {
    std::visit([n](auto& s) { s.n = n; }, spec);
    return spec;
}

namespace {

void validate_seed(const SeedSpec& seed, std::size_t n) {
    std::visit(overloaded{
                   [](const CompleteSeed& s) { require(s.k >= 1, "complete seed needs k >= 1"); },
                   [](const HormozdiariSeed&) {},
                   [](const InverseGeometricSeed& s) {
                       require(s.n >= 1, "inverse geometric seed needs at least one node");
                       require(s.d >= 1, "inverse geometric seed needs d >= 1");
                       require(s.radius > 0.0, "inverse geometric seed needs R > 0");
                   },
                   [](const ExplicitSeed& s) { require(s.graph.node_count() >= 1, "explicit seed is empty"); },
               },
               seed);
    require(seed_node_count(seed) <= n, "seed network has " + std::to_string(seed_node_count(seed)) +
                                            " nodes, more than n = " + std::to_string(n));
}

} // namespace

void validate(const ModelSpec& spec) {
    std::visit(overloaded{
                   [](const GnpBatch& s) { require(is_probability(s.p), "gnp: p must lie in [0, 1]"); },
                   [](const GnpGrown& s) {
                       require(is_probability(s.p), "gnp_grown: p must lie in [0, 1]");
                       validate_seed(s.seed, s.n);
                   },
                   [](const Gnm& s) { require(s.m <= dyad_count(s.n), "gnm: m exceeds C(n, 2)"); },
                   [](const Triadic& s) {
                       require(s.m <= dyad_count(s.n), "triadic: m exceeds C(n, 2)");
                       require(is_probability(s.p0) && is_probability(s.p1) && is_probability(s.p2),
                               "triadic: p0, p1, p2 must lie in [0, 1]");
                       require(s.m == 0 || s.p0 > 0.0, "triadic: p0 = 0 never adds a first edge");
                   },
                   [](const Dmc& s) {
                       require(is_probability(s.q_mod) && is_probability(s.q_con),
                               "dmc: q_mod and q_con must lie in [0, 1]");
                       validate_seed(s.seed, s.n);
                   },
                   [](const Dmr& s) {
                       require(is_probability(s.q_del), "dmr: q_del must lie in [0, 1]");
                       require(s.q_new >= 0.0 && std::isfinite(s.q_new), "dmr: q_new must be nonnegative");
                       validate_seed(s.seed, s.n);
                   },
               },
               spec);
}

Graph make_seed(const SeedSpec& spec, RngStream& rng) {
    return std::visit(
        overloaded{
            [](const CompleteSeed& s) {
                std::vector<Edge> edges;
                for (NodeId v = 1; v < s.k; ++v)
                    for (NodeId w = 0; w < v; ++w)
                        edges.push_back({v, w});
                return build_graph(s.k, edges);
            },
            [&rng](const HormozdiariSeed&) {
                constexpr NodeId kFirst = 7, kCliqueNodes = 17, kTotal = 50;
                std::vector<Edge> edges;
                for (NodeId v = 1; v < kCliqueNodes; ++v)
                    for (NodeId w = 0; w < v; ++w)
                        if ((v < kFirst) == (w < kFirst))
                            edges.push_back({v, w});
                for (NodeId a = 0; a < kFirst; ++a)
                    for (NodeId b = kFirst; b < kCliqueNodes; ++b)
                        if (rng.bernoulli(0.67))
                            edges.push_back({a, b});
                for (NodeId v = kCliqueNodes; v < kTotal; ++v)
                    edges.push_back({v, static_cast<NodeId>(rng.uniform_index(kCliqueNodes))});
                return build_graph(kTotal, edges);
            },
            [&rng](const InverseGeometricSeed& s) {
                std::vector<double> coords(s.n * s.d);
                for (double& c : coords)
                    c = rng.normal();
                const double r2 = s.radius * s.radius;
                std::vector<Edge> edges;
                for (std::size_t i = 1; i < s.n; ++i) {
                    for (std::size_t j = 0; j < i; ++j) {
                        double dist2 = 0.0;
                        for (std::size_t k = 0; k < s.d; ++k) {
                            const double diff = coords[i * s.d + k] - coords[j * s.d + k];
                            dist2 += diff * diff;
                        }
                        if (dist2 > r2)
                            edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
                    }
                }
                return build_graph(s.n, edges);
            },
            [](const ExplicitSeed& s) { return s.graph; },
        },
        spec);
}

void for_each_gnp_edge(std::size_t n, double p, RngStream& rng, const std::function<void(NodeId, NodeId)>& emit) {
    require(is_probability(p), "gen_gnp: p must lie in [0, 1]");
    const std::uint64_t total = dyad_count(n);
    if (p <= 0.0 || total == 0)
        return;
    // Geometric skipping over the dyad index; row v holds dyads (v, 0..v-1).
    std::uint64_t v = 1, w = 0;
    std::uint64_t index = 0;
    const bool all = p >= 1.0;
    const double log_q = all ? 0.0 : std::log1p(-p);
    std::uint64_t skip = all ? 0 : rng.geometric_skip(log_q);
    while (true) {
        if (skip >= total - index)
            return;
        index += skip;
        w += skip;
        while (w >= v) {
            w -= v;
            ++v;
        }
        emit(static_cast<NodeId>(v), static_cast<NodeId>(w));
        ++index;
        if (++w == v) {
            w = 0;
            ++v;
        }
        if (index >= total)
            return;
        skip = all ? 0 : rng.geometric_skip(log_q);
    }
}

Graph gen_gnp(std::size_t n, double p, RngStream& rng) {
    std::vector<Edge> edges;
    if (p > 0.0)
        edges.reserve(static_cast<std::size_t>(static_cast<double>(dyad_count(n)) * std::min(p, 1.0) * 1.05) + 16);
    for_each_gnp_edge(n, p, rng, [&edges](NodeId u, NodeId v) { edges.push_back({u, v}); });
    return build_graph(n, edges);
}

Graph grow_gnp_from_seed(const Graph& seed, std::size_t n, double p, RngStream& rng) {
    require(is_probability(p), "grow_gnp_from_seed: p must lie in [0, 1]");
    check_seed_fits(seed, n);
    std::vector<Edge> edges = seed.edges();
    for (std::size_t t = seed.node_count(); t < n; ++t)
        bernoulli_subset(t, p, rng, [&](NodeId x) { edges.push_back({static_cast<NodeId>(t), x}); });
    return build_graph(n, edges);
}

Graph gen_gnm(std::size_t n, std::uint64_t m, RngStream& rng) {
    const std::uint64_t total = dyad_count(n);
    require(m <= total, "gen_gnm: m = " + std::to_string(m) + " exceeds C(n, 2) = " + std::to_string(total));
    // Floyd's sampling of an m-subset of dyad indices.
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(m * 2);
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::uint64_t j = total - m; j < total; ++j) {
        const std::uint64_t t = rng.uniform_index(j + 1);
        const std::uint64_t pick = chosen.insert(t).second ? t : (chosen.insert(j), j);
        edges.push_back(decode_dyad(pick));
    }
    return build_graph(n, edges);
}

Graph gen_triadic(std::size_t n, std::uint64_t m, double p0, double p1, double p2, RngStream& rng) {
    validate(Triadic{n, m, p0, p1, p2});
    detail::DynamicAdjacency adj(n);
    for (std::size_t i = 0; i < n; ++i)
        adj.add_node();
    while (adj.edge_count() < m) {
        const auto u = static_cast<NodeId>(rng.uniform_index(n));
        auto v = static_cast<NodeId>(rng.uniform_index(n - 1));
        if (v >= u)
            ++v;
        if (adj.has(u, v))
            continue;
        const std::size_t closed = adj.common_neighbors(u, v);
        double accept = p0;
        if (closed >= 1)
            accept += p1 + p2 * static_cast<double>(closed - 1);
        if (rng.bernoulli(std::min(1.0, accept)))
            adj.add(u, v);
    }
    return adj.to_graph();
}

Graph gen_dmc(const Graph& seed, std::size_t n, double q_mod, double q_con, RngStream& rng) {
    require(is_probability(q_mod) && is_probability(q_con), "gen_dmc: q_mod and q_con must lie in [0, 1]");
    check_seed_fits(seed, n);
    require(seed.node_count() >= 1 || n == 0, "gen_dmc: seed must have at least one node");
    detail::DynamicAdjacency adj(n, seed);
    while (adj.node_count() < n) {
        const auto chosen = static_cast<NodeId>(rng.uniform_index(adj.node_count()));
        const NodeId fresh = adj.add_node();
        const auto targets = adj.neighbors(chosen);
        for (NodeId w : targets)
            adj.add(fresh, w);
        for (NodeId w : targets) {
            if (rng.bernoulli(q_mod)) {
                if (rng.bernoulli(0.5))
                    adj.remove(chosen, w);
                else
                    adj.remove(fresh, w);
            }
        }
        if (rng.bernoulli(q_con))
            adj.add(chosen, fresh);
    }
    return adj.to_graph();
}

Graph gen_dmr(const Graph& seed, std::size_t n, double q_del, double q_new, bool remove_singletons, RngStream& rng) {
    require(is_probability(q_del), "gen_dmr: q_del must lie in [0, 1]");
    require(q_new >= 0.0, "gen_dmr: q_new must be nonnegative");
    check_seed_fits(seed, n);
    require(seed.node_count() >= 1 || n == 0, "gen_dmr: seed must have at least one node");
    detail::DynamicAdjacency adj(n, seed);
    // With singleton removal a step can be discarded; bound the total work.
    const std::uint64_t max_steps = 1000 * static_cast<std::uint64_t>(n) + 1000;
    std::uint64_t steps = 0;
    while (adj.node_count() < n) {
        if (++steps > max_steps)
            throw std::runtime_error("gen_dmr: singleton removal prevents growth to " + std::to_string(n) + " nodes");
        const std::size_t existing = adj.node_count();
        const auto chosen = static_cast<NodeId>(rng.uniform_index(existing));
        const NodeId fresh = adj.add_node();
        for (NodeId w : adj.neighbors(chosen))
            if (!rng.bernoulli(q_del))
                adj.add(fresh, w);
        const double p_new = std::min(1.0, q_new / static_cast<double>(existing));
        bernoulli_subset(existing, p_new, rng, [&](NodeId x) { adj.add(fresh, x); });
        if (remove_singletons && adj.degree(fresh) == 0)
            adj.pop_isolated_node();
    }
    return adj.to_graph();
}

Graph draw(const ModelSpec& spec, RngStream& rng) {
    validate(spec);
    return std::visit(overloaded{
                          [&](const GnpBatch& s) { return gen_gnp(s.n, s.p, rng); },
                          [&](const GnpGrown& s) { return grow_gnp_from_seed(make_seed(s.seed, rng), s.n, s.p, rng); },
                          [&](const Gnm& s) { return gen_gnm(s.n, s.m, rng); },
                          [&](const Triadic& s) { return gen_triadic(s.n, s.m, s.p0, s.p1, s.p2, rng); },
                          [&](const Dmc& s) { return gen_dmc(make_seed(s.seed, rng), s.n, s.q_mod, s.q_con, rng); },
                          [&](const Dmr& s) {
                              return gen_dmr(make_seed(s.seed, rng), s.n, s.q_del, s.q_new, s.remove_singletons, rng);
                          },
                      },
                      spec);
}

} // namespace netresample
