#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace netresample {

struct CommandOptions {
    std::optional<std::filesystem::path> out_dir; // overrides config "out"
    std::optional<std::uint64_t> seed;            // overrides config "seed"
    std::filesystem::path base_dir;               // relative input paths resolve here
};

struct CommandResult {
    std::filesystem::path out_dir;
    std::vector<std::string> artifacts; // relative to out_dir, manifest last
};

/// Names accepted by run_command.
const std::vector<std::string>& command_names();

/// Validates `config` for command `name`, runs it and writes its artifacts
/// plus manifest.json under the output directory. Throws ConfigError for a
/// bad config and DataError for unreadable or malformed inputs.
CommandResult run_command(const std::string& name, const nlohmann::json& config, const CommandOptions& options);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

} // namespace netresample
