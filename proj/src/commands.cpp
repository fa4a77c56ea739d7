#include "netresample/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "netresample/analytic.hpp"
#include "netresample/errors.hpp"
#include "netresample/generators.hpp"
#include "netresample/inference.hpp"
#include "netresample/io.hpp"
#include "netresample/parallel.hpp"
#include "netresample/resampling.hpp"
#include "netresample/rng.hpp"
#include "netresample/stability.hpp"
#include "field_reader.hpp"

namespace netresample {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kToolVersion = "0.1.0";

using detail::FieldReader;

std::string read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot read '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string short_real(double x) { return json(x).dump(); }

std::string csv_cell(const std::optional<double>& v) { return v ? format_real(*v) : std::string("NA"); }

// Writes artifacts under one directory and records their hashes.
class ArtifactWriter {
public:
    explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec)
            throw DataError("cannot create output directory '" + dir_.string() + "': " + ec.message());
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw DataError("cannot open '" + path.string() + "' for writing");
        out << content;
        out.close();
        if (!out)
            throw DataError("failed writing '" + path.string() + "'");
        artifacts_.push_back({{"path", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
        names_.push_back(name);
    }

    void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

    void add_input(json entry) { inputs_.push_back(std::move(entry)); }

    CommandResult finish(const std::string& command, const json& config) {
        json manifest{{"command", command},
                      {"tool_version", kToolVersion},
                      {"rng", std::string(RngStream::kAlgorithm)},
                      {"config", config},
                      {"inputs", inputs_},
                      {"artifacts", artifacts_}};
        const std::string text = manifest.dump(2) + "\n";
        std::ofstream out(dir_ / "manifest.json", std::ios::binary);
        out << text;
        if (!out)
            throw DataError("failed writing manifest");
        names_.push_back("manifest.json");
        return {dir_, names_};
    }

private:
    fs::path dir_;
    json artifacts_ = json::array();
    json inputs_ = json::array();
    std::vector<std::string> names_;
};

struct Context {
    const std::string& command;
    json config;     // effective config recorded in the manifest
    FieldReader reader;
    const CommandOptions& options;

    Context(const std::string& name, const json& cfg, const CommandOptions& opts)
        : command(name), config(cfg), reader(config, name + " config"), options(opts) {}

    std::uint64_t seed() {
        const bool in_config = reader.has("seed");
        if (options.seed) {
            config["seed"] = *options.seed;
            return *options.seed;
        }
        if (!in_config)
            throw ConfigError(command + ": a master seed is required (config \"seed\" or --seed)");
        return reader.get<std::uint64_t>("seed");
    }

    fs::path out_dir() {
        const bool in_config = reader.has("out");
        if (options.out_dir)
            return *options.out_dir;
        if (!in_config)
            throw ConfigError(command + ": an output directory is required (config \"out\" or --out)");
        return resolve(reader.get<std::string>("out"));
    }

    fs::path resolve(const std::string& p) const {
        const fs::path path(p);
        return path.is_absolute() ? path : options.base_dir / path;
    }

    json recorded_config() const {
        json c = config;
        c.erase("out");
        return c;
    }
};

template <class F>
auto as_config_error(const std::string& where, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

std::vector<StatKind> parse_stats(Context& ctx, const std::string& key, std::vector<StatKind> fallback) {
    const json* list = ctx.reader.find(key);
    if (!list)
        return fallback;
    if (!list->is_array() || list->empty())
        throw ConfigError(ctx.command + ": '" + key + "' must be a nonempty array of statistic names");
    std::vector<StatKind> stats;
    for (const auto& item : *list) {
        if (!item.is_string())
            throw ConfigError(ctx.command + ": '" + key + "' entries must be strings");
        stats.push_back(as_config_error(ctx.command, [&] { return StatKind::parse(item.get<std::string>()); }));
    }
    return stats;
}

std::vector<StatKind> gof_default_stats() {
    return {StatKind::avg_local_clustering(), StatKind::triangle_count(), StatKind::degree_assortativity()};
}

std::size_t subsample_size(Context& ctx, std::size_t n) {
    const bool has_size = ctx.reader.has("subsample_size");
    const bool has_alpha = ctx.reader.has("alpha");
    if (has_size && has_alpha)
        throw ConfigError(ctx.command + ": give either 'alpha' or 'subsample_size', not both");
    std::size_t m;
    if (has_size) {
        m = ctx.reader.get<std::size_t>("subsample_size");
    } else {
        const double alpha = ctx.reader.get_or<double>("alpha", 0.3);
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw ConfigError(ctx.command + ": 'alpha' must lie in (0, 1]");
        m = static_cast<std::size_t>(std::llround(alpha * static_cast<double>(n)));
    }
    if (m < 1 || m > n)
        throw ConfigError(ctx.command + ": subsample size " + std::to_string(m) + " outside [1, " +
                          std::to_string(n) + "]");
    return m;
}

std::size_t positive(Context& ctx, const std::string& key, std::size_t fallback) {
    const auto v = ctx.reader.get_or<std::size_t>(key, fallback);
    if (v == 0)
        throw ConfigError(ctx.command + ": '" + key + "' must be positive");
    return v;
}

SelfLoopPolicy self_loop_policy(Context& ctx) {
    const auto s = ctx.reader.get_or<std::string>("self_loops", "drop");
    if (s == "drop")
        return SelfLoopPolicy::Drop;
    if (s == "reject")
        return SelfLoopPolicy::Reject;
    throw ConfigError(ctx.command + ": 'self_loops' must be \"drop\" or \"reject\"");
}

std::string file_stem(const std::string& name) {
    std::string out;
    for (char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out.empty() ? std::string("_") : out;
}

struct LoadedNetwork {
    Graph graph;
    std::vector<std::string> labels;
};

// Reads an edge list, optionally keeps its LCC, records the input in the
// manifest and writes the index -> label map as <tag>_nodes.csv.
LoadedNetwork load_network(Context& ctx, ArtifactWriter& out, const std::string& path, bool lcc,
                           SelfLoopPolicy policy, const std::string& tag) {
    const fs::path resolved = ctx.resolve(path);
    const std::string bytes = read_file_bytes(resolved);
    std::istringstream in(bytes);
    EdgeListData data;
    try {
        data = parse_edge_list(in, policy);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
    if (data.graph.node_count() == 0)
        throw DataError(path + ": no edges");
    LoadedNetwork net{std::move(data.graph), std::move(data.labels)};
    json entry{{"path", path},
               {"sha256", sha256_hex(bytes)},
               {"nodes", net.graph.node_count()},
               {"edges", net.graph.edge_count()},
               {"dropped_self_loops", data.dropped_self_loops},
               {"duplicate_edges", data.duplicate_edges}};
    if (lcc) {
        std::vector<NodeId> original;
        Graph component = largest_connected_component(net.graph, original);
        std::vector<std::string> labels;
        labels.reserve(original.size());
        for (NodeId v : original)
            labels.push_back(net.labels[v]);
        net = {std::move(component), std::move(labels)};
        entry["lcc_nodes"] = net.graph.node_count();
        entry["lcc_edges"] = net.graph.edge_count();
    }
    out.add_input(entry);
    std::string map = "index,label\n";
    for (std::size_t i = 0; i < net.labels.size(); ++i)
        map += std::to_string(i) + "," + net.labels[i] + "\n";
    out.write(tag + "_nodes.csv", map);
    return net;
}

void write_distribution(ArtifactWriter& out, const std::string& stem, const ResamplingDistribution& d) {
    const std::string base = stem + "_" + d.statistic.name();
    out.write(base + ".csv", format_distribution_csv(d));
    out.write_json(base + ".json", provenance_json(d));
}

std::vector<NamedModel> parse_models(Context& ctx, std::size_t default_n) {
    const json* list = ctx.reader.find("models");
    if (!list || !list->is_array() || list->empty())
        throw ConfigError(ctx.command + ": 'models' must be a nonempty array");
    std::vector<NamedModel> models;
    std::set<std::string> stems;
    for (std::size_t i = 0; i < list->size(); ++i) {
        FieldReader r((*list)[i], ctx.command + " models[" + std::to_string(i) + "]");
        NamedModel m;
        m.name = r.get_or<std::string>("name", "model" + std::to_string(i));
        m.spec = model_spec_from_json(r.raw("spec"), ctx.options.base_dir, default_n);
        r.finish();
        if (!stems.insert(file_stem(m.name)).second)
            throw ConfigError(ctx.command + ": duplicate model name '" + m.name + "'");
        models.push_back(std::move(m));
    }
    return models;
}

// Commands ------------------------------------------------------------------

CommandResult cmd_generate(Context& ctx) {
    const std::uint64_t seed = ctx.seed();
    const fs::path dir = ctx.out_dir();
    const ModelSpec spec = model_spec_from_json(ctx.reader.raw("model"), ctx.options.base_dir);
    const std::size_t count = positive(ctx, "count", 1);
    const auto stats = parse_stats(ctx, "stats", {});
    ctx.reader.finish();

    std::vector<Graph> graphs(count);
    parallel_for(count, [&](std::size_t i) {
        RngStream rng(seed, i);
        graphs[i] = draw(spec, rng);
    });

    ArtifactWriter out(dir);
    std::string table = "replicate,node_count,edge_count";
    for (const auto& s : stats)
        table += "," + s.name();
    table += "\n";
    for (std::size_t i = 0; i < count; ++i) {
        const Graph& g = graphs[i];
        out.write("graph_" + std::to_string(i) + ".edges",
                  "# nodes " + std::to_string(g.node_count()) + "\n" + format_edge_list(g));
        table += std::to_string(i) + "," + std::to_string(g.node_count()) + "," + std::to_string(g.edge_count());
        for (const auto& s : stats)
            table += "," + csv_cell(compute_stat(g, s));
        table += "\n";
    }
    out.write("graph_stats.csv", table);
    return out.finish(ctx.command, ctx.recorded_config());
}

CommandResult cmd_subsample(Context& ctx) {
    const std::uint64_t seed = ctx.seed();
    const fs::path dir = ctx.out_dir();
    const auto input = ctx.reader.get<std::string>("input");
    const bool lcc = ctx.reader.get_or<bool>("lcc", false);
    const auto policy = self_loop_policy(ctx);
    const std::size_t replicates = positive(ctx, "replicates", 100);
    const auto stats = parse_stats(ctx, "stats", gof_default_stats());

    ArtifactWriter out(dir);
    const auto net = load_network(ctx, out, input, lcc, policy, "input");
    const SubsamplePlan plan{subsample_size(ctx, net.graph.node_count()), replicates, seed};
    ctx.reader.finish();

    for (const auto& d : resample_observed(net.graph, plan, stats))
        write_distribution(out, "observed", d);
    return out.finish(ctx.command, ctx.recorded_config());
}

CommandResult cmd_gof(Context& ctx) {
    const std::uint64_t seed = ctx.seed();
    const fs::path dir = ctx.out_dir();
    const auto observed_path = ctx.reader.get<std::string>("observed");
    const bool lcc = ctx.reader.get_or<bool>("lcc", false);
    const auto policy = self_loop_policy(ctx);
    const std::size_t replicates = positive(ctx, "replicates", 100);
    const std::size_t b_o = positive(ctx, "replicates_observed", replicates);
    const std::size_t b_m = positive(ctx, "replicates_model", replicates);
    const auto stats = parse_stats(ctx, "stats", gof_default_stats());
    GofOptions options;
    options.compute_kl = ctx.reader.get_or<bool>("kl", true);
    options.kl_bins = positive(ctx, "kl_bins", 20);
    options.single_draw = ctx.reader.get_or<bool>("single_draw", false);

    ArtifactWriter out(dir);
    const auto net = load_network(ctx, out, observed_path, lcc, policy, "observed");
    const std::size_t n = net.graph.node_count();
    const std::size_t m = subsample_size(ctx, n);
    const auto models = parse_models(ctx, n);
    ctx.reader.finish();

    const SubsamplePlan plan_o{m, b_o, derive_seed(seed, 1)};
    const SubsamplePlan plan_m{m, b_m, derive_seed(seed, 2)};
    const GofReport report = as_config_error(
        ctx.command, [&] { return goodness_of_fit(net.graph, models, stats, plan_o, plan_m, options); });

    for (const auto& d : report.observed)
        write_distribution(out, "observed", d);
    for (const auto& fit : report.models) {
        for (const auto& d : fit.distributions)
            write_distribution(out, file_stem(fit.name), d);
        for (const auto& d : fit.single_draw)
            write_distribution(out, file_stem(fit.name) + "_single", d);
    }
    out.write_json("gof_report.json", to_json(report));
    return out.finish(ctx.command, ctx.recorded_config());
}

CommandResult cmd_select(Context& ctx) {
    const std::uint64_t seed = ctx.seed();
    const fs::path dir = ctx.out_dir();
    const auto observed_path = ctx.reader.get<std::string>("observed");
    const bool lcc = ctx.reader.get_or<bool>("lcc", false);
    const auto policy = self_loop_policy(ctx);
    const std::size_t replicates = positive(ctx, "replicates", 100);
    const std::size_t b_o = positive(ctx, "replicates_observed", replicates);
    const std::size_t b_m = positive(ctx, "replicates_model", replicates);
    const auto schema = parse_stats(ctx, "features", default_feature_schema());
    const KnnParams knn{positive(ctx, "k", KnnParams{}.k)};

    ArtifactWriter out(dir);
    const auto net = load_network(ctx, out, observed_path, lcc, policy, "observed");
    const std::size_t n = net.graph.node_count();
    const std::size_t m = subsample_size(ctx, n);
    const auto models = parse_models(ctx, n);
    ctx.reader.finish();

    std::vector<ModelSpec> specs;
    for (const auto& model : models)
        specs.push_back(model.spec);
    const SubsamplePlan plan_m{m, b_m, derive_seed(seed, 1)};
    const SubsamplePlan plan_o{m, b_o, derive_seed(seed, 2)};
    const TrainingSet training =
        as_config_error(ctx.command, [&] { return build_training_set(specs, n, plan_m, schema); });
    const auto classifier = as_config_error(ctx.command, [&] { return classifier_fit(training, knn); });
    const SelectionReport report = select_model(net.graph, *classifier, plan_o, schema);

    std::string rows = "label";
    for (const auto& s : schema)
        rows += "," + s.name();
    rows += "\n";
    for (std::size_t r = 0; r < training.rows.size(); ++r) {
        rows += std::to_string(training.labels[r]);
        for (double v : training.rows[r])
            rows += "," + format_real(v);
        rows += "\n";
    }
    out.write("training_set.csv", rows);

    json j = to_json(report);
    json names = json::array();
    for (const auto& model : models)
        names.push_back(model.name);
    j["model_names"] = names;
    j["selected_model_name"] = models[report.selected_model].name;
    j["training_dropped"] = training.dropped;
    j["subsample_size"] = m;
    out.write_json("selection_report.json", j);
    return out.finish(ctx.command, ctx.recorded_config());
}

CommandResult cmd_compare(Context& ctx) {
    const std::uint64_t seed = ctx.seed();
    const fs::path dir = ctx.out_dir();
    const json* list = ctx.reader.find("networks");
    if (!list || !list->is_array() || list->size() != 2 || !(*list)[0].is_string() || !(*list)[1].is_string())
        throw ConfigError(ctx.command + ": 'networks' must be an array of two edge-list paths");
    const bool lcc = ctx.reader.get_or<bool>("lcc", false);
    const auto policy = self_loop_policy(ctx);
    const std::size_t replicates = positive(ctx, "replicates", 100);
    const auto stats = parse_stats(ctx, "stats", gof_default_stats());
    GofOptions options;
    options.compute_kl = ctx.reader.get_or<bool>("kl", true);
    options.kl_bins = positive(ctx, "kl_bins", 20);

    ArtifactWriter out(dir);
    const auto first = load_network(ctx, out, (*list)[0].get<std::string>(), lcc, policy, "network1");
    const auto second = load_network(ctx, out, (*list)[1].get<std::string>(), lcc, policy, "network2");
    // alpha applies to the smaller network so both use one subsample size
    const std::size_t m = subsample_size(ctx, std::min(first.graph.node_count(), second.graph.node_count()));
    ctx.reader.finish();

    const SubsamplePlan plan1{m, replicates, derive_seed(seed, 1)};
    const SubsamplePlan plan2{m, replicates, derive_seed(seed, 2)};
    const NetworkComparison result = compare_networks(first.graph, second.graph, stats, plan1, plan2, options);
    for (const auto& d : result.first)
        write_distribution(out, "network1", d);
    for (const auto& d : result.second)
        write_distribution(out, "network2", d);
    json j = to_json(result);
    j["subsample_size"] = m;
    j["network_nodes"] = {first.graph.node_count(), second.graph.node_count()};
    out.write_json("compare_report.json", j);
    return out.finish(ctx.command, ctx.recorded_config());
}

CommandResult cmd_table1(Context& ctx) {
    const fs::path dir = ctx.out_dir();
    const std::size_t n = ctx.reader.get_or<std::size_t>("n", 1000);
    const double p = ctx.reader.get_or<double>("p", 0.2);
    const double tail_eps = ctx.reader.get_or<double>("tail_eps", 1e-12);
    std::vector<double> alphas{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.5, 0.6, 0.7, 0.8, 0.9};
    if (const json* a = ctx.reader.find("alphas")) {
        if (!a->is_array() || a->empty())
            throw ConfigError(ctx.command + ": 'alphas' must be a nonempty array of numbers");
        alphas.clear();
        for (const auto& v : *a) {
            if (!v.is_number())
                throw ConfigError(ctx.command + ": 'alphas' must be a nonempty array of numbers");
            alphas.push_back(v.get<double>());
        }
    }
    std::optional<McBudget> budget;
    std::uint64_t seed = 0;
    if (const json* e = ctx.reader.find("empirical")) {
        FieldReader r(*e, ctx.command + " empirical");
        McBudget b;
        b.outer_draws = r.get_or<std::size_t>("outer", b.outer_draws);
        b.inner_subsamples = r.get_or<std::size_t>("inner", b.inner_subsamples);
        b.fc_draws = r.get_or<std::size_t>("fc", b.fc_draws);
        r.finish();
        if (b.outer_draws == 0 || b.inner_subsamples == 0 || b.fc_draws == 0)
            throw ConfigError(ctx.command + ": empirical budgets must be positive");
        budget = b;
        seed = ctx.seed();
    } else if (ctx.options.seed || ctx.reader.has("seed")) {
        seed = ctx.seed();
    }
    ctx.reader.finish();

    std::string csv = "alpha,naive,improved,empirical_estimate,empirical_se\n";
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const auto scenario = as_config_error(ctx.command, [&] { return AnalyticScenario::make(n, p, alphas[i]); });
        csv += short_real(alphas[i]) + "," + format_real(expected_ks(scenario, ApproxMode::Naive, tail_eps)) + "," +
               format_real(expected_ks(scenario, ApproxMode::Improved, tail_eps));
        if (budget) {
            const auto est = estimate_expected_ks_mc(scenario, *budget, derive_seed(seed, i));
            csv += "," + format_real(est.mean) + "," + csv_cell(est.standard_error);
        } else {
            csv += ",NA,NA";
        }
        csv += "\n";
    }
    ArtifactWriter out(dir);
    out.write("table1.csv", csv);
    return out.finish(ctx.command, ctx.recorded_config());
}

CommandResult cmd_stability(Context& ctx) {
    const std::uint64_t seed = ctx.seed();
    const fs::path dir = ctx.out_dir();
    const json model = ctx.reader.raw("model");
    std::vector<std::size_t> sizes{5, 50};
    if (const json* s = ctx.reader.find("seed_sizes")) {
        if (!s->is_array() || s->empty())
            throw ConfigError(ctx.command + ": 'seed_sizes' must be a nonempty array of positive integers");
        sizes.clear();
        for (const auto& v : *s) {
            if (!v.is_number_integer() || v.get<long long>() <= 0)
                throw ConfigError(ctx.command + ": 'seed_sizes' must be a nonempty array of positive integers");
            sizes.push_back(v.get<std::size_t>());
        }
    }
    const std::size_t replicates = positive(ctx, "replicates", 20);
    if (replicates < 2)
        throw ConfigError(ctx.command + ": 'replicates' must be at least 2");
    ctx.reader.finish();
    if (!model.is_object() || !model.contains("model"))
        throw ConfigError(ctx.command + ": 'model' must be a model spec");
    const std::string kind = model.value("model", "");
    if (kind != "dmc" && kind != "dmr" && kind != "gnp_grown")
        throw ConfigError(ctx.command + ": model must be one grown from a seed (gnp_grown, dmc, dmr)");

    ArtifactWriter out(dir);
    std::string summary = "seed_size,mean_pairwise_ks\n";
    for (std::size_t k : sizes) {
        json j = model;
        j["seed"] = {{"type", "complete"}, {"k", k}};
        const ModelSpec spec = model_spec_from_json(j, ctx.options.base_dir);
        const auto result = degree_stability(spec, replicates, derive_seed(seed, k));
        std::string hist = "replicate,degree,count\n";
        for (std::size_t r = 0; r < result.degree_sequences.size(); ++r) {
            std::map<std::size_t, std::size_t> counts;
            for (std::size_t d : result.degree_sequences[r])
                ++counts[d];
            for (const auto& [d, c] : counts)
                hist += std::to_string(r) + "," + std::to_string(d) + "," + std::to_string(c) + "\n";
        }
        out.write("degrees_seed" + std::to_string(k) + ".csv", hist);
        summary += std::to_string(k) + "," + format_real(result.mean_pairwise_ks) + "\n";
    }
    out.write("stability_summary.csv", summary);
    return out.finish(ctx.command, ctx.recorded_config());
}

} // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"generate", "subsample", "gof", "select",
                                                "compare",  "table1",    "stability"};
    return names;
}

CommandResult run_command(const std::string& name, const json& config, const CommandOptions& options) {
    Context ctx(name, config, options);
    if (name == "generate")
        return cmd_generate(ctx);
    if (name == "subsample")
        return cmd_subsample(ctx);
    if (name == "gof")
        return cmd_gof(ctx);
    if (name == "select")
        return cmd_select(ctx);
    if (name == "compare")
        return cmd_compare(ctx);
    if (name == "table1")
        return cmd_table1(ctx);
    if (name == "stability")
        return cmd_stability(ctx);
    throw ConfigError("unknown command '" + name + "'");
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

} // namespace netresample
