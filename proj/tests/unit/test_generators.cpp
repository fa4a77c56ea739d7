#include <doctest.h>

#include <cmath>
#include <map>

#include "netresample/generators.hpp"
#include "netresample/resampling.hpp"
#include "netresample/statistics.hpp"
#include "oracles.hpp"

using namespace netresample;
using oracle::complete;

namespace {

double binom2(double n) { return n * (n - 1) / 2; }

Graph draw_at(const ModelSpec& spec, std::uint64_t seed, std::uint64_t stream = 0) {
    RngStream rng(seed, stream);
    return draw(spec, rng);
}

} // namespace

TEST_CASE("seeds") {
    RngStream rng(1, 0);
    CHECK(make_seed(CompleteSeed{5}, rng) == complete(5));
    const Graph h = make_seed(HormozdiariSeed{}, rng);
    CHECK(h.node_count() == 50);
    for (NodeId v = 17; v < 50; ++v) {
        REQUIRE(h.degree(v) == 1);
        CHECK(h.neighbors(v)[0] < 17);
    }
    for (NodeId u = 0; u < 7; ++u)
        for (NodeId v = u + 1; v < 7; ++v)
            CHECK(h.has_edge(u, v));
    for (NodeId u = 7; u < 17; ++u)
        for (NodeId v = u + 1; v < 17; ++v)
            CHECK(h.has_edge(u, v));
    const Graph ig = make_seed(InverseGeometricSeed{40, 2, 1.5}, rng);
    CHECK(ig.node_count() == 40);
    CHECK(ig.edge_count() > 0);
    CHECK(seed_node_count(HormozdiariSeed{}) == 50);
    CHECK(seed_node_count(InverseGeometricSeed{12, 3, 1.0}) == 12);
}

TEST_CASE("hormozdiari cross dyads appear at rate 0.67") {
    double cross = 0;
    const int reps = 400;
    for (int r = 0; r < reps; ++r) {
        RngStream rng(77, r);
        const Graph h = make_seed(HormozdiariSeed{}, rng);
        for (NodeId u = 0; u < 7; ++u)
            for (NodeId v = 7; v < 17; ++v)
                cross += h.has_edge(u, v);
    }
    const double n = 70.0 * reps;
    CHECK(std::abs(cross / n - 0.67) < 5 * std::sqrt(0.67 * 0.33 / n));
}

TEST_CASE("gen_gnp examples") {
    RngStream rng(5, 0);
    CHECK(gen_gnp(10, 0.0, rng).edge_count() == 0);
    CHECK(gen_gnp(10, 1.0, rng) == complete(10));
    const Graph g = gen_gnp(1000, 0.1, rng);
    const double mean = binom2(1000) * 0.1, sd = std::sqrt(binom2(1000) * 0.1 * 0.9);
    CHECK(std::abs(static_cast<double>(g.edge_count()) - mean) < 4 * sd);
}

TEST_CASE("gen_gnp edge-count moments over 2000 draws") {
    for (double p : {0.05, 0.2}) {
        const int reps = 2000;
        double s = 0, s2 = 0;
        for (int r = 0; r < reps; ++r) {
            RngStream rng(17, r);
            const double e = static_cast<double>(gen_gnp(200, p, rng).edge_count());
            s += e;
            s2 += e * e;
        }
        const double mean = s / reps, var = (s2 - reps * mean * mean) / (reps - 1);
        const double true_var = binom2(200) * p * (1 - p);
        CHECK(std::abs(mean - binom2(200) * p) < 4 * std::sqrt(true_var / reps));
        CHECK(std::abs(var / true_var - 1.0) < 0.2);
    }
}

TEST_CASE("grow_gnp_from_seed") {
    RngStream rng(6, 0);
    CHECK(grow_gnp_from_seed(complete(5), 5, 0.3, rng) == complete(5));
    CHECK(grow_gnp_from_seed(complete(3), 10, 1.0, rng) == complete(10));
    CHECK_THROWS(grow_gnp_from_seed(complete(5), 4, 0.3, rng));

    // seed nodes keep their clique and gain roughly p per later node
    const Graph g = grow_gnp_from_seed(complete(100), 1000, 0.1, rng);
    double seed_deg = 0, late_deg = 0;
    for (NodeId v = 0; v < 100; ++v)
        seed_deg += g.degree(v);
    for (NodeId v = 900; v < 1000; ++v)
        late_deg += g.degree(v);
    CHECK(seed_deg / 100 > 99 + 0.1 * 900 - 10);
    CHECK(seed_deg > late_deg * 1.5);
}

TEST_CASE("gen_gnm examples and exact edge count") {
    RngStream rng(8, 0);
    CHECK(gen_gnm(10, 0, rng).edge_count() == 0);
    CHECK(gen_gnm(10, 45, rng) == complete(10));
    CHECK_THROWS(gen_gnm(10, 46, rng));
    for (std::uint64_t m : {1, 17, 200, 4000})
        CHECK(gen_gnm(100, m, rng).edge_count() == m);
}

TEST_CASE("gen_gnm is uniform over edge sets of G(5, 3)") {
    std::map<std::vector<std::pair<NodeId, NodeId>>, int> counts;
    const int reps = 60000;
    for (int r = 0; r < reps; ++r) {
        RngStream rng(9, r);
        std::vector<std::pair<NodeId, NodeId>> key;
        for (const auto& e : gen_gnm(5, 3, rng).edges())
            key.emplace_back(e.u, e.v);
        ++counts[key];
    }
    CHECK(counts.size() == 120);
    const double expect = reps / 120.0, sd = std::sqrt(reps * (1.0 / 120) * (119.0 / 120));
    for (const auto& [edges, c] : counts)
        CHECK(std::abs(c - expect) < 5 * sd);
}

TEST_CASE("gen_triadic") {
    RngStream rng(10, 0);
    CHECK(gen_triadic(8, 28, 0.3, 0.1, 0.05, rng) == complete(8));
    for (std::uint64_t m : {0, 10, 300})
        CHECK(gen_triadic(40, m, 0.3, 0.1, 0.05, rng).edge_count() == m);
    CHECK_THROWS(gen_triadic(10, 5, 0.0, 0.5, 0.5, rng));
    CHECK_THROWS(gen_triadic(10, 46, 0.3, 0.1, 0.1, rng));
}

TEST_CASE("triadic p2 > 0 yields more triangles") {
    const int reps = 500;
    double with = 0, without = 0;
    for (int r = 0; r < reps; ++r) {
        RngStream a(12, r), b(13, r);
        with += static_cast<double>(triangle_count(gen_triadic(100, 2000, 0.3, 0.1, 0.05, a)));
        without += static_cast<double>(triangle_count(gen_triadic(100, 2000, 0.3, 0.1, 0.0, b)));
    }
    CHECK(with / reps > without / reps);
}

TEST_CASE("gen_dmc examples") {
    RngStream rng(14, 0);
    CHECK(gen_dmc(complete(3), 5, 0.0, 1.0, rng) == complete(5));
    for (int r = 0; r < 50; ++r) {
        RngStream s(15, r);
        const Graph g = gen_dmc(complete(3), 4, 1.0, 0.0, s);
        REQUIRE(g.node_count() == 4);
        // the duplicated node u and the new node 3 are never joined, and each
        // of u's two former neighbors keeps exactly one of (u, w), (3, w)
        std::size_t u_count = 0;
        for (NodeId u = 0; u < 3; ++u) {
            bool is_u = true;
            std::size_t kept = 0;
            for (NodeId w = 0; w < 3; ++w) {
                if (w == u)
                    continue;
                if (g.has_edge(u, w) == g.has_edge(3, w))
                    is_u = false;
                kept += g.has_edge(u, w) + g.has_edge(3, w);
            }
            if (is_u && kept == 2 && !g.has_edge(u, 3)) {
                const NodeId a = u == 0 ? 1 : 0, b = u == 2 ? 1 : 2;
                if (g.has_edge(a, b))
                    ++u_count;
            }
        }
        CHECK(u_count >= 1);
        CHECK(g.edge_count() == 3);
    }
    for (int r = 0; r < 5; ++r)
        CHECK(draw_at(Dmc{CompleteSeed{4}, 60, 0.4, 0.3}, 16, r).node_count() == 60);
    CHECK_THROWS(gen_dmc(complete(5), 4, 0.1, 0.1, rng));
}

TEST_CASE("gen_dmr examples") {
    RngStream rng(18, 0);
    const Graph g = gen_dmr(complete(2), 3, 0.0, 0.0, false, rng);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(gen_dmr(complete(5), 5, 0.4, 0.5, false, rng) == complete(5));
    for (int r = 0; r < 5; ++r)
        CHECK(draw_at(Dmr{CompleteSeed{4}, 80, 0.5, 0.4, false}, 19, r).node_count() == 80);
    CHECK_THROWS(gen_dmr(complete(5), 4, 0.1, 0.1, false, rng));
}

TEST_CASE("dmr with singleton removal never keeps an isolated new node") {
    for (int r = 0; r < 10; ++r) {
        const Graph g = draw_at(Dmr{HormozdiariSeed{}, 100, 0.365, 0.12, true}, 20, r);
        CHECK(g.node_count() <= 100);
        for (NodeId v = 50; v < g.node_count(); ++v)
            CHECK(g.degree(v) > 0);
    }
}

TEST_CASE("draw dispatch") {
    CHECK(draw_at(GnpBatch{10, 1.0}, 1) == complete(10));
    CHECK(draw_at(Dmc{CompleteSeed{3}, 5, 0.0, 1.0}, 1) == complete(5));
    CHECK(draw_at(Gnm{20, 30}, 1).edge_count() == 30);
    CHECK(draw_at(GnpGrown{CompleteSeed{3}, 10, 1.0}, 1) == complete(10));
    CHECK(model_name(Triadic{}) == "triadic");
    CHECK_THROWS(validate(ModelSpec{GnpBatch{10, 1.5}}));
    CHECK_THROWS(validate(ModelSpec{Dmc{CompleteSeed{20}, 10, 0.1, 0.1}}));
    CHECK_NOTHROW(validate(ModelSpec{Dmr{CompleteSeed{2}, 10, 0.1, 1.05, false}}));
}

TEST_CASE("draws are deterministic per stream") {
    const std::vector<ModelSpec> specs{GnpBatch{200, 0.1},
                                       GnpGrown{CompleteSeed{5}, 100, 0.1},
                                       Gnm{100, 300},
                                       Triadic{60, 200, 0.3, 0.1, 0.05},
                                       Dmc{HormozdiariSeed{}, 120, 0.2, 0.1},
                                       Dmr{InverseGeometricSeed{}, 120, 0.3, 0.5, true}};
    for (const auto& spec : specs) {
        CHECK(draw_at(spec, 99, 3) == draw_at(spec, 99, 3));
        CHECK_FALSE(draw_at(spec, 99, 3) == draw_at(spec, 99, 4));
    }
}

TEST_CASE("triadic with p1 = p2 = 0 matches G(n, m) in triangle law") {
    std::vector<double> a, b;
    for (int r = 0; r < 600; ++r) {
        RngStream x(21, r), y(22, r);
        a.push_back(static_cast<double>(triangle_count(gen_triadic(30, 60, 0.4, 0.0, 0.0, x))));
        b.push_back(static_cast<double>(triangle_count(gen_gnm(30, 60, y))));
    }
    // 1% two-sample critical value
    CHECK(ks_two_sample(a, b) < 1.63 * std::sqrt(2.0 / 600));
}
