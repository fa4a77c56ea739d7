#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>

#include "netresample/graph.hpp"
#include "netresample/rng.hpp"

namespace netresample {

// Seed networks ------------------------------------------------------------

struct CompleteSeed {
    std::size_t k = 1;
};

/// Two cliques (7 and 10 nodes) joined by each of their 70 cross dyads with
/// probability 0.67, plus 33 pendant nodes each attached to one uniformly
/// chosen clique node. 50 nodes.
struct HormozdiariSeed {};

/// n points with i.i.d. N(0, 1) coordinates in d dimensions; i ~ j iff
/// their Euclidean distance exceeds `radius`.
struct InverseGeometricSeed {
    std::size_t n = 40;
    std::size_t d = 2;
    double radius = 1.5;
};

struct ExplicitSeed {
    Graph graph;
    std::string path; // informational, for provenance
};

using SeedSpec = std::variant<CompleteSeed, HormozdiariSeed, InverseGeometricSeed, ExplicitSeed>;

// Models -------------------------------------------------------------------

struct GnpBatch {
    std::size_t n = 0;
    double p = 0.0;
};

/// G(n, p) grown node by node from a seed.
struct GnpGrown {
    SeedSpec seed;
    std::size_t n = 0;
    double p = 0.0;
};

struct Gnm {
    std::size_t n = 0;
    std::uint64_t m = 0;
};

/// G(n, m) variant whose edge acceptance probability grows with the number
/// of triangles the candidate edge would close.
struct Triadic {
    std::size_t n = 0;
    std::uint64_t m = 0;
    double p0 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
};

/// Duplication-mutation-complementation.
struct Dmc {
    SeedSpec seed;
    std::size_t n = 0;
    double q_mod = 0.0;
    double q_con = 0.0;
};

/// Duplication with random mutation. q_new is divided by the current node
/// count, so values above 1 are meaningful.
struct Dmr {
    SeedSpec seed;
    std::size_t n = 0;
    double q_del = 0.0;
    double q_new = 0.0;
    bool remove_singletons = false;
};

using ModelSpec = std::variant<GnpBatch, GnpGrown, Gnm, Triadic, Dmc, Dmr>;

std::size_t seed_node_count(const SeedSpec& seed);
std::string model_name(const ModelSpec& spec);
std::size_t target_node_count(const ModelSpec& spec);
/// Copy of spec with its target node count replaced.
ModelSpec with_node_count(ModelSpec spec, std::size_t n);
/// Throws std::invalid_argument describing the first violated constraint.
void validate(const ModelSpec& spec);

// Generators ---------------------------------------------------------------

Graph make_seed(const SeedSpec& spec, RngStream& rng);

/// Calls emit(u, v) with u > v for every edge of a G(n, p) draw, in
/// increasing order of the dyad index; consumes the stream exactly as gen_gnp.
void for_each_gnp_edge(std::size_t n, double p, RngStream& rng, const std::function<void(NodeId, NodeId)>& emit);

Graph gen_gnp(std::size_t n, double p, RngStream& rng);
Graph grow_gnp_from_seed(const Graph& seed, std::size_t n, double p, RngStream& rng);
Graph gen_gnm(std::size_t n, std::uint64_t m, RngStream& rng);
Graph gen_triadic(std::size_t n, std::uint64_t m, double p0, double p1, double p2, RngStream& rng);
Graph gen_dmc(const Graph& seed, std::size_t n, double q_mod, double q_con, RngStream& rng);
Graph gen_dmr(const Graph& seed, std::size_t n, double q_del, double q_new, bool remove_singletons, RngStream& rng);

/// Builds the seed (if any) and runs the model, all on `rng`.
Graph draw(const ModelSpec& spec, RngStream& rng);

} // namespace netresample
