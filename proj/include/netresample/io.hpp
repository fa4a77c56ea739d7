#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "netresample/generators.hpp"
#include "netresample/graph.hpp"
#include "netresample/inference.hpp"
#include "netresample/resampling.hpp"

namespace netresample {

enum class SelfLoopPolicy { Drop, Reject };

struct EdgeListData {
    Graph graph;
    std::vector<std::string> labels; // dense index -> label, first-appearance order
    std::size_t edge_lines = 0;
    std::size_t dropped_self_loops = 0;
    std::size_t duplicate_edges = 0;
};

/// Reads "u v" lines; '#' lines and blank lines are skipped. Labels are
/// arbitrary tokens mapped to dense indices in order of first appearance.
/// Throws DataError naming the line on malformed input or, under Reject, on a
/// self-loop. Dropped self-loops do not introduce nodes.
EdgeListData read_edge_list(const std::filesystem::path& path, SelfLoopPolicy policy = SelfLoopPolicy::Reject);
EdgeListData parse_edge_list(std::istream& in, SelfLoopPolicy policy = SelfLoopPolicy::Reject);

/// Writes one edge per line. Lines are ordered so that, for graphs whose
/// indices follow first appearance (anything produced by read_edge_list),
/// reading the file back reproduces the same dense indices. Isolated nodes
/// cannot be represented.
std::string format_edge_list(const Graph& g, const std::vector<std::string>* labels = nullptr);
void write_edge_list(const Graph& g, const std::filesystem::path& path,
                     const std::vector<std::string>* labels = nullptr);

/// "%.17g", so parsing the text recovers the double exactly.
std::string format_real(double value);

/// "replicate,<stat>" header then one row per replicate; NA for missing.
std::string format_distribution_csv(const ResamplingDistribution& d);
void write_distribution_csv(const ResamplingDistribution& d, const std::filesystem::path& path);

struct ParsedDistribution {
    std::string statistic;
    std::vector<std::optional<double>> replicates;
};
ParsedDistribution parse_distribution_csv(const std::string& text);

// JSON --------------------------------------------------------------------

nlohmann::json to_json(const SeedSpec& seed);
nlohmann::json to_json(const ModelSpec& spec);
/// Relative seed paths resolve against base_dir. When default_n is given it
/// fills a missing "n". Throws ConfigError on schema violations.
ModelSpec model_spec_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {},
                               std::optional<std::size_t> default_n = std::nullopt);

nlohmann::json to_json(const Summary& s);
nlohmann::json to_json(const StatComparison& c);
nlohmann::json provenance_json(const ResamplingDistribution& d);
nlohmann::json to_json(const SelectionReport& r);
nlohmann::json to_json(const GofReport& r);
nlohmann::json to_json(const NetworkComparison& r);

} // namespace netresample
