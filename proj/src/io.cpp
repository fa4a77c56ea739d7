#include "netresample/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "netresample/errors.hpp"
#include "field_reader.hpp"
#include "netresample/rng.hpp"

namespace netresample {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string source_kind_name(SourceKind kind) {
    switch (kind) {
    case SourceKind::Observed:
        return "observed";
    case SourceKind::ModelIndependentDraws:
        return "model_independent_draws";
    case SourceKind::ModelSingleDraw:
        return "model_single_draw";
    }
    return {};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out)
        throw DataError("failed writing '" + path.string() + "'");
}

} // namespace

EdgeListData parse_edge_list(std::istream& in, SelfLoopPolicy policy) {
    EdgeListData data;
    std::unordered_map<std::string, NodeId> index;
    std::vector<Edge> edges;
    std::set<std::pair<NodeId, NodeId>> seen;
    auto intern = [&](const std::string& label) {
        auto [it, inserted] = index.try_emplace(label, static_cast<NodeId>(data.labels.size()));
        if (inserted)
            data.labels.push_back(label);
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream tokens(line);
        std::string a, b, extra;
        if (!(tokens >> a >> b) || (tokens >> extra))
            throw DataError("line " + std::to_string(line_no) + ": expected two node labels");
        ++data.edge_lines;
        if (a == b) {
            if (policy == SelfLoopPolicy::Reject)
                throw DataError("line " + std::to_string(line_no) + ": self-loop on node '" + a + "'");
            ++data.dropped_self_loops;
            continue;
        }
        const NodeId u = intern(a);
        const NodeId v = intern(b);
        if (!seen.insert({std::min(u, v), std::max(u, v)}).second) {
            ++data.duplicate_edges;
            continue;
        }
        edges.push_back({u, v});
    }
    data.graph = build_graph(data.labels.size(), edges);
    return data;
}

EdgeListData read_edge_list(const std::filesystem::path& path, SelfLoopPolicy policy) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot read edge list '" + path.string() + "'");
    try {
        return parse_edge_list(in, policy);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string format_edge_list(const Graph& g, const std::vector<std::string>* labels) {
    auto label = [&](NodeId v) { return labels ? (*labels)[v] : std::to_string(v); };
    std::string out;
    std::vector<bool> shown(g.node_count(), false);
    std::set<std::pair<NodeId, NodeId>> written;
    auto emit = [&](NodeId first, NodeId second) {
        out += label(first);
        out += ' ';
        out += label(second);
        out += '\n';
        shown[first] = shown[second] = true;
        written.insert({std::min(first, second), std::max(first, second)});
    };
    // Introduce nodes in index order: via an already shown neighbor when
    // possible, otherwise via the edge to its smallest neighbor.
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (shown[v] || g.degree(v) == 0)
            continue;
        const NodeId w = g.neighbors(v).front();
        if (shown[w])
            emit(w, v);
        else
            emit(v, w);
    }
    for (const auto& e : g.edges())
        if (!written.contains({e.u, e.v}))
            emit(e.u, e.v);
    return out;
}

void write_edge_list(const Graph& g, const std::filesystem::path& path, const std::vector<std::string>* labels) {
    write_text(path, format_edge_list(g, labels));
}

std::string format_real(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::string format_distribution_csv(const ResamplingDistribution& d) {
    std::string out = "replicate," + d.statistic.name() + "\n";
    for (std::size_t i = 0; i < d.replicates.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += d.replicates[i] ? format_real(*d.replicates[i]) : std::string("NA");
        out += '\n';
    }
    return out;
}

void write_distribution_csv(const ResamplingDistribution& d, const std::filesystem::path& path) {
    write_text(path, format_distribution_csv(d));
}

ParsedDistribution parse_distribution_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("replicate,", 0) != 0)
        throw DataError("distribution CSV: missing 'replicate,<stat>' header");
    ParsedDistribution out;
    out.statistic = line.substr(10);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.substr(0, comma) != std::to_string(row))
            throw DataError("distribution CSV: bad row " + std::to_string(row));
        const std::string cell = line.substr(comma + 1);
        if (cell == "NA") {
            out.replicates.emplace_back();
        } else {
            char* end = nullptr;
            errno = 0;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0' || errno == ERANGE)
                throw DataError("distribution CSV: bad value '" + cell + "'");
            out.replicates.emplace_back(v);
        }
        ++row;
    }
    return out;
}

// JSON ----------------------------------------------------------------------

json to_json(const SeedSpec& seed) {
    return std::visit(overloaded{
                          [](const CompleteSeed& s) { return json{{"type", "complete"}, {"k", s.k}}; },
                          [](const HormozdiariSeed&) { return json{{"type", "hormozdiari"}}; },
                          [](const InverseGeometricSeed& s) {
                              return json{{"type", "inverse_geometric"}, {"k", s.n}, {"d", s.d}, {"R", s.radius}};
                          },
                          [](const ExplicitSeed& s) { return json{{"type", "file"}, {"path", s.path}}; },
                      },
                      seed);
}

json to_json(const ModelSpec& spec) {
    json j = std::visit(
        overloaded{
            [](const GnpBatch& s) { return json{{"n", s.n}, {"p", s.p}}; },
            [](const GnpGrown& s) { return json{{"n", s.n}, {"p", s.p}, {"seed", to_json(s.seed)}}; },
            [](const Gnm& s) { return json{{"n", s.n}, {"m", s.m}}; },
            [](const Triadic& s) { return json{{"n", s.n}, {"m", s.m}, {"p0", s.p0}, {"p1", s.p1}, {"p2", s.p2}}; },
            [](const Dmc& s) {
                return json{{"n", s.n}, {"q_mod", s.q_mod}, {"q_con", s.q_con}, {"seed", to_json(s.seed)}};
            },
            [](const Dmr& s) {
                return json{{"n", s.n},
                            {"q_del", s.q_del},
                            {"q_new", s.q_new},
                            {"remove_singletons", s.remove_singletons},
                            {"seed", to_json(s.seed)}};
            },
        },
        spec);
    j["model"] = model_name(spec);
    return j;
}

namespace {

using detail::FieldReader;

SeedSpec seed_from_json(const json& j, const std::filesystem::path& base_dir) {
    FieldReader r(j, "seed");
    const auto type = r.get<std::string>("type");
    SeedSpec seed;
    if (type == "complete") {
        seed = CompleteSeed{r.get<std::size_t>("k")};
    } else if (type == "hormozdiari") {
        seed = HormozdiariSeed{};
    } else if (type == "inverse_geometric") {
        seed = InverseGeometricSeed{r.get_or<std::size_t>("k", 40), r.get_or<std::size_t>("d", 2),
                                    r.get_or<double>("R", 1.5)};
    } else if (type == "file") {
        const auto path = r.get<std::string>("path");
        const auto resolved = std::filesystem::path(path).is_absolute() ? std::filesystem::path(path) : base_dir / path;
        seed = ExplicitSeed{read_edge_list(resolved, SelfLoopPolicy::Drop).graph, path};
    } else {
        throw ConfigError("seed: unknown type '" + type + "'");
    }
    r.finish();
    return seed;
}

} // namespace

ModelSpec model_spec_from_json(const json& j, const std::filesystem::path& base_dir,
                               std::optional<std::size_t> default_n) {
    FieldReader r(j, "model spec");
    const auto model = r.get<std::string>("model");
    std::size_t n = 0;
    if (r.has("n"))
        n = r.get<std::size_t>("n");
    else if (default_n)
        n = *default_n;
    else
        throw ConfigError("model spec: missing field 'n'");

    ModelSpec spec;
    if (model == "gnp") {
        spec = GnpBatch{n, r.get<double>("p")};
    } else if (model == "gnp_grown") {
        spec = GnpGrown{seed_from_json(r.raw("seed"), base_dir), n, r.get<double>("p")};
    } else if (model == "gnm") {
        spec = Gnm{n, r.get<std::uint64_t>("m")};
    } else if (model == "triadic") {
        spec = Triadic{n, r.get<std::uint64_t>("m"), r.get<double>("p0"), r.get<double>("p1"), r.get<double>("p2")};
    } else if (model == "dmc") {
        spec = Dmc{seed_from_json(r.raw("seed"), base_dir), n, r.get<double>("q_mod"), r.get<double>("q_con")};
    } else if (model == "dmr") {
        spec = Dmr{seed_from_json(r.raw("seed"), base_dir), n, r.get<double>("q_del"), r.get<double>("q_new"),
                   r.get_or<bool>("remove_singletons", false)};
    } else {
        throw ConfigError("model spec: unknown model '" + model + "'");
    }
    r.finish();
    try {
        validate(spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model spec: ") + e.what());
    }
    return spec;
}

json to_json(const Summary& s) {
    return json{{"count", s.count}, {"missing", s.missing}, {"mean", s.mean}, {"variance", s.variance},
                {"min", s.min},     {"max", s.max},         {"q25", s.q25},   {"q50", s.q50},
                {"q75", s.q75}};
}

namespace {
json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json optional_json(const std::optional<Summary>& s) { return s ? to_json(*s) : json(nullptr); }
} // namespace

json to_json(const StatComparison& c) {
    return json{{"ks", optional_json(c.ks)},
                {"kl_pq", optional_json(c.kl_pq)},
                {"kl_qp", optional_json(c.kl_qp)},
                {"kl_direction", "kl_pq = KL(observed || model), kl_qp = KL(model || observed)"},
                {"observed_summary", optional_json(c.observed_summary)},
                {"model_summary", optional_json(c.model_summary)},
                {"observed_missing", c.observed_missing},
                {"model_missing", c.model_missing}};
}

json provenance_json(const ResamplingDistribution& d) {
    json j{{"statistic", d.statistic.name()},
           {"source", source_kind_name(d.source.kind)},
           {"master_seed", d.source.master_seed},
           {"source_node_count", d.source.source_node_count},
           {"subsample_size", d.subsample_size},
           {"replicate_count", d.replicate_count()},
           {"missing_count", d.missing_count()},
           {"rng", std::string(RngStream::kAlgorithm)}};
    if (d.source.source_node_count > 0)
        j["alpha"] = static_cast<double>(d.subsample_size) / static_cast<double>(d.source.source_node_count);
    if (d.source.model)
        j["model"] = to_json(*d.source.model);
    return j;
}

json to_json(const SelectionReport& r) {
    json assignments = json::array();
    for (const auto& a : r.per_subsample_assignment)
        assignments.push_back(a ? json(*a) : json(nullptr));
    return json{{"per_model_proportion", r.per_model_proportion},
                {"selected_model", r.selected_model},
                {"confidence", r.confidence},
                {"tie", r.tie},
                {"per_subsample_assignment", assignments}};
}

json to_json(const GofReport& r) {
    json models = json::array();
    for (const auto& m : r.models) {
        json per_stat = json::object();
        for (const auto& c : m.comparisons)
            per_stat[c.statistic.name()] = to_json(c);
        models.push_back(json{{"name", m.name}, {"spec", to_json(m.spec)}, {"per_stat", per_stat}});
    }
    json observed = json::object();
    for (const auto& d : r.observed)
        observed[d.statistic.name()] = optional_json(d.values().empty() ? std::nullopt : std::optional(summarize(d)));
    return json{{"observed_nodes", r.observed_nodes},
                {"subsample_size", r.subsample_size},
                {"observed_summary", observed},
                {"models", models}};
}

json to_json(const NetworkComparison& r) {
    json per_stat = json::object();
    for (const auto& c : r.comparisons)
        per_stat[c.statistic.name()] = to_json(c);
    return json{{"per_stat", per_stat}};
}

} // namespace netresample
