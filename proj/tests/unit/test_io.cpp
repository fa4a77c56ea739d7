#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "netresample/commands.hpp"
#include "netresample/errors.hpp"
#include "netresample/generators.hpp"
#include "netresample/io.hpp"
#include "netresample/parallel.hpp"
#include "netresample/statistics.hpp"
#include "oracles.hpp"

using namespace netresample;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

EdgeListData parse(const std::string& text, SelfLoopPolicy policy = SelfLoopPolicy::Reject) {
    std::istringstream in(text);
    return parse_edge_list(in, policy);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        files[entry.path().filename().string()] = slurp(entry.path());
    return files;
}

} // namespace

TEST_CASE("read_edge_list examples") {
    const auto a = parse("0 1\n1 2");
    CHECK(a.graph.node_count() == 3);
    CHECK(a.graph.edge_count() == 2);
    const auto b = parse("a b\nb a\n");
    CHECK(b.graph.node_count() == 2);
    CHECK(b.graph.edge_count() == 1);
    CHECK(b.duplicate_edges == 1);
    CHECK(b.labels == std::vector<std::string>{"a", "b"});
    try {
        parse("3 3");
        FAIL("expected an error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
    const auto dropped = parse("# header\n\n3 3\nx y\n", SelfLoopPolicy::Drop);
    CHECK(dropped.dropped_self_loops == 1);
    CHECK(dropped.graph.node_count() == 2);
    try {
        parse("0 1\n# ok\n1\n");
        FAIL("expected an error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("0 1 2\n"), DataError);
    CHECK_THROWS_AS(read_edge_list("/nonexistent/file.txt"), DataError);
}

TEST_CASE("edge list round trip is the identity on read graphs") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 100; ++trial) {
        // random labelled edge list with duplicates and shuffled orientation
        const std::size_t n = 2 + gen() % 30;
        std::vector<std::string> names(n);
        for (std::size_t i = 0; i < n; ++i)
            names[i] = "n" + std::to_string(gen() % 1000) + "_" + std::to_string(i);
        std::string text;
        const std::size_t lines = 1 + gen() % 60;
        for (std::size_t l = 0; l < lines; ++l) {
            const std::size_t u = gen() % n, v = gen() % n;
            if (u != v)
                text += names[u] + "\t" + names[v] + "\n";
        }
        if (text.empty())
            continue;
        const auto first = parse(text);
        const auto second = parse(format_edge_list(first.graph, &first.labels));
        CHECK(second.graph == first.graph);
        CHECK(second.labels == first.labels);
    }
}

TEST_CASE("edge list round trip preserves degrees and triangles of generated graphs") {
    for (int r = 0; r < 10; ++r) {
        RngStream rng(6, r);
        const Graph g = gen_gnm(60, 150, rng);
        std::vector<NodeId> keep;
        for (NodeId v = 0; v < g.node_count(); ++v)
            if (g.degree(v) > 0)
                keep.push_back(v);
        const Graph h = induced_subgraph(g, keep);
        const auto back = parse(format_edge_list(h)).graph;
        auto d1 = h.degrees(), d2 = back.degrees();
        std::sort(d1.begin(), d1.end());
        std::sort(d2.begin(), d2.end());
        CHECK(d1 == d2);
        CHECK(triangle_count(back) == triangle_count(h));
    }
}

TEST_CASE("distribution CSV") {
    ResamplingDistribution d;
    d.statistic = StatKind::triangle_count();
    d.replicates = {5.0, 5.0, 5.0};
    CHECK(format_distribution_csv(d) == "replicate,triangle_count\n0,5\n1,5\n2,5\n");
    d.replicates = {1.5, std::nullopt};
    CHECK(format_distribution_csv(d) == "replicate,triangle_count\n0,1.5\n1,NA\n");

    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    d.statistic = StatKind::avg_local_clustering();
    d.replicates.clear();
    for (int i = 0; i < 500; ++i)
        d.replicates.push_back(i % 50 == 0 ? std::nullopt : std::optional<double>(u(gen) / 3.0));
    d.replicates.push_back(0.1);
    d.replicates.push_back(1e-300);
    const auto parsed = parse_distribution_csv(format_distribution_csv(d));
    CHECK(parsed.statistic == "avg_clustering");
    CHECK(parsed.replicates == d.replicates);

    const auto dir = oracle::temp_dir("csv");
    write_distribution_csv(d, dir / "d.csv");
    CHECK(slurp(dir / "d.csv") == format_distribution_csv(d));
    CHECK_THROWS_AS(write_distribution_csv(d, dir / "missing" / "d.csv"), DataError);
}

TEST_CASE("model spec JSON round trip") {
    const std::vector<ModelSpec> specs{GnpBatch{10, 0.25},
                                       GnpGrown{CompleteSeed{4}, 20, 0.1},
                                       Gnm{10, 7},
                                       Triadic{100, 2000, 0.3, 0.1, 0.05},
                                       Dmc{HormozdiariSeed{}, 100, 0.2, 0.1},
                                       Dmr{InverseGeometricSeed{30, 3, 1.25}, 100, 0.365, 1.05, true}};
    for (const auto& spec : specs) {
        const json j = to_json(spec);
        CHECK(to_json(model_spec_from_json(j)) == j);
        RngStream a(1, 0), b(1, 0);
        CHECK(draw(model_spec_from_json(j), a) == draw(spec, b));
    }
    const json dmr = to_json(specs[5]);
    CHECK(dmr.at("model") == "dmr");
    CHECK(dmr.at("seed").at("type") == "inverse_geometric");
    CHECK(dmr.at("seed").at("R") == 1.25);
    CHECK(dmr.at("remove_singletons") == true);

    CHECK_THROWS_AS(model_spec_from_json(json{{"model", "ba"}, {"n", 10}}), ConfigError);
    CHECK_THROWS_AS(model_spec_from_json(json{{"model", "gnp"}, {"n", 10}}), ConfigError);
    CHECK_THROWS_AS(model_spec_from_json(json{{"model", "gnp"}, {"n", 10}, {"p", 0.1}, {"q", 1}}), ConfigError);
    CHECK_THROWS_AS(model_spec_from_json(json{{"model", "gnp"}, {"n", 10}, {"p", 2.0}}), ConfigError);
    CHECK_THROWS_AS(model_spec_from_json(json{{"model", "gnp"}, {"n", -3}, {"p", 0.5}}), ConfigError);
    CHECK(std::get<GnpBatch>(model_spec_from_json(json{{"model", "gnp"}, {"p", 0.5}}, {}, 42)).n == 42);

    const auto dir = oracle::temp_dir("seedfile");
    put(dir / "seed.txt", "a b\nb c\n");
    const json with_file{{"model", "dmc"}, {"n", 10}, {"q_mod", 0.1}, {"q_con", 0.1},
                         {"seed", {{"type", "file"}, {"path", "seed.txt"}}}};
    const auto spec = std::get<Dmc>(model_spec_from_json(with_file, dir));
    CHECK(std::get<ExplicitSeed>(spec.seed).graph.edge_count() == 2);
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("table1 command") {
    const auto dir = oracle::temp_dir("table1");
    const auto result = run_command("table1", json{{"n", 1000}, {"p", 0.2}}, {dir, std::nullopt, dir});
    const std::string csv = slurp(dir / "table1.csv");
    CHECK(csv.rfind("alpha,naive,improved,empirical_estimate,empirical_se\n0.05,", 0) == 0);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    const double naive[] = {0.0158, 0.0317, 0.0475, 0.0633, 0.0790, 0.0947,
                            0.1559, 0.1855, 0.2143, 0.2422, 0.2692};
    for (double expected : naive) {
        std::getline(lines, line);
        const auto first = line.find(',');
        const double value = std::stod(line.substr(first + 1, line.find(',', first + 1) - first - 1));
        CHECK(std::abs(value - expected) <= 0.002);
    }
    CHECK(result.artifacts.back() == "manifest.json");

    const auto mc = oracle::temp_dir("table1_mc");
    run_command("table1", json{{"n", 60}, {"p", 0.2}, {"alphas", {0.5}}, {"seed", 3},
                               {"empirical", {{"outer", 3}, {"inner", 50}, {"fc", 50}}}},
                {mc, std::nullopt, mc});
    CHECK(slurp(mc / "table1.csv").find("NA") == std::string::npos);
    CHECK_THROWS_AS(run_command("table1", json{{"empirical", {{"outer", 3}}}}, {mc, std::nullopt, mc}), ConfigError);
}

TEST_CASE("config validation") {
    const auto dir = oracle::temp_dir("config");
    const CommandOptions opts{dir, std::nullopt, dir};
    const json gen{{"model", {{"model", "gnp"}, {"n", 10}, {"p", 0.5}}}};
    CHECK_THROWS_AS(run_command("generate", gen, opts), ConfigError); // no seed
    CHECK_NOTHROW(run_command("generate", gen, {dir, 5, dir}));
    json extra = gen;
    extra["seed"] = 1;
    extra["colour"] = "red";
    CHECK_THROWS_AS(run_command("generate", extra, opts), ConfigError);
    CHECK_THROWS_AS(run_command("fit", gen, opts), ConfigError);
    CHECK_THROWS_AS(run_command("table1", json{{"n", 1000}}, {std::nullopt, std::nullopt, dir}), ConfigError);
    put(dir / "bad.txt", "0 1\n2\n");
    CHECK_THROWS_AS(run_command("subsample", json{{"input", "bad.txt"}, {"seed", 1}, {"replicates", 3}}, opts),
                    DataError);
    put(dir / "ok.txt", "0 1\n1 2\n");
    CHECK_THROWS_AS(run_command("subsample", json{{"input", "ok.txt"}, {"seed", 1}, {"subsample_size", 9}}, opts),
                    ConfigError);
    CHECK_THROWS_AS(
        run_command("subsample", json{{"input", "ok.txt"}, {"seed", 1}, {"alpha", 0.5}, {"subsample_size", 1}}, opts),
        ConfigError);
}

TEST_CASE("manifest lists every artifact with its hash") {
    const auto dir = oracle::temp_dir("manifest");
    put(dir / "net.txt", "a b\nb c\nc a\nc d\nd e\n");
    const auto result = run_command(
        "subsample", json{{"input", "net.txt"}, {"seed", 9}, {"replicates", 5}, {"alpha", 0.6}}, {dir / "out", std::nullopt, dir});
    const json manifest = json::parse(slurp(dir / "out" / "manifest.json"));
    CHECK(manifest.at("rng") == std::string(RngStream::kAlgorithm));
    CHECK(manifest.at("inputs").at(0).at("sha256") == sha256_hex(slurp(dir / "net.txt")));
    std::size_t listed = 0;
    for (const auto& a : manifest.at("artifacts")) {
        CHECK(sha256_hex(slurp(dir / "out" / a.at("path").get<std::string>())) == a.at("sha256"));
        ++listed;
    }
    CHECK(listed + 1 == std::distance(fs::directory_iterator(dir / "out"), fs::directory_iterator{}));
    CHECK(listed + 1 == result.artifacts.size());
}

TEST_CASE("gof command on an LCC-extracted edge list with two DMR specs") {
    const auto dir = oracle::temp_dir("gof");
    RngStream rng(21, 0);
    const Graph g = gen_dmr(oracle::complete(3), 120, 0.4, 0.3, false, rng);
    std::string text = format_edge_list(g) + "500 501\n";
    put(dir / "ppi.txt", text);
    const json seed_h{{"type", "complete"}, {"k", 5}};
    const json config{{"observed", "ppi.txt"},
                      {"lcc", true},
                      {"replicates", 40},
                      {"seed", 4},
                      {"models",
                       {{{"name", "dmr_a"}, {"spec", {{"model", "dmr"}, {"q_del", 0.4}, {"q_new", 0.3}, {"seed", seed_h}}}},
                        {{"name", "dmr_b"}, {"spec", {{"model", "dmr"}, {"q_del", 0.6}, {"q_new", 1.05}, {"remove_singletons", true}, {"seed", seed_h}}}}}}};
    run_command("gof", config, {dir / "out", std::nullopt, dir});
    const json report = json::parse(slurp(dir / "out" / "gof_report.json"));
    CHECK(report.at("subsample_size") == std::llround(0.3 * report.at("observed_nodes").get<double>()));
    REQUIRE(report.at("models").size() == 2);
    for (const auto& m : report.at("models")) {
        for (const char* stat : {"avg_clustering", "triangle_count", "assortativity"}) {
            const auto& s = m.at("per_stat").at(stat);
            for (const char* key : {"ks", "kl_pq", "kl_qp", "observed_summary", "model_summary"})
                CHECK(s.contains(key));
            CHECK(fs::exists(dir / "out" / (m.at("name").get<std::string>() + "_" + stat + ".csv")));
        }
    }
    const std::string nodes = slurp(dir / "out" / "observed_nodes.csv");
    CHECK(nodes.find("500") == std::string::npos);
}

TEST_CASE("artifacts are byte-identical across reruns and thread counts") {
    const auto dir = oracle::temp_dir("repro");
    RngStream rng(22, 0);
    put(dir / "a.txt", format_edge_list(gen_gnp(80, 0.15, rng)));
    put(dir / "b.txt", format_edge_list(gen_gnp(80, 0.2, rng)));
    const json triadic{{"model", "triadic"}, {"m", 300}, {"p0", 0.3}, {"p1", 0.1}};
    const std::vector<std::pair<std::string, json>> runs{
        {"generate", {{"model", {{"model", "dmc"}, {"n", 60}, {"q_mod", 0.2}, {"q_con", 0.1}, {"seed", {{"type", "complete"}, {"k", 3}}}}}, {"count", 3}, {"stats", {"triangle_count", "assortativity"}}}},
        {"subsample", {{"input", "a.txt"}, {"replicates", 30}}},
        {"gof", {{"observed", "a.txt"}, {"replicates", 30}, {"single_draw", true}, {"models", {{{"spec", {{"model", "gnp"}, {"p", 0.15}}}}}}}},
        {"select", {{"observed", "a.txt"}, {"replicates", 40}, {"k", 5}, {"alpha", 0.8}, {"models", {{{"name", "p2"}, {"spec", [&] { json t = triadic; t["p2"] = 0.05; return t; }()}}, {{"name", "flat"}, {"spec", [&] { json t = triadic; t["p2"] = 0.0; return t; }()}}}}}},
        {"compare", {{"networks", {"a.txt", "b.txt"}}, {"replicates", 30}}},
        {"stability", {{"model", {{"model", "dmc"}, {"n", 80}, {"q_mod", 0.2}, {"q_con", 0.1}}}, {"replicates", 3}}},
    };
    for (const auto& [name, config] : runs) {
        CAPTURE(name);
        set_worker_count(1);
        run_command(name, config, {dir / (name + "1"), 77, dir});
        set_worker_count(4);
        run_command(name, config, {dir / (name + "4"), 77, dir});
        run_command(name, config, {dir / (name + "4b"), 77, dir});
        set_worker_count(0);
        const auto one = snapshot(dir / (name + "1"));
        CHECK(one.size() > 1);
        CHECK(one == snapshot(dir / (name + "4")));
        CHECK(one == snapshot(dir / (name + "4b")));
        run_command(name, config, {dir / (name + "other"), 78, dir});
        CHECK_FALSE(one == snapshot(dir / (name + "other")));
    }
}

TEST_CASE("stability command writes histograms and a summary") {
    const auto dir = oracle::temp_dir("stability");
    run_command("stability",
                json{{"model", {{"model", "dmc"}, {"n", 100}, {"q_mod", 0.2}, {"q_con", 0.1}}},
                     {"seed_sizes", {5, 20}},
                     {"replicates", 4},
                     {"seed", 1}},
                {dir, std::nullopt, dir});
    CHECK(slurp(dir / "degrees_seed5.csv").rfind("replicate,degree,count\n0,", 0) == 0);
    CHECK(fs::exists(dir / "degrees_seed20.csv"));
    CHECK(slurp(dir / "stability_summary.csv").rfind("seed_size,mean_pairwise_ks\n5,", 0) == 0);
    CHECK_THROWS_AS(run_command("stability", json{{"model", {{"model", "gnm"}, {"n", 10}, {"m", 3}}}, {"seed", 1}},
                                {dir, std::nullopt, dir}),
                    ConfigError);
}
