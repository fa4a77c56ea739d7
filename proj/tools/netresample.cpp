// netresample command-line entry point.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "netresample/commands.hpp"
#include "netresample/errors.hpp"
#include "netresample/parallel.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

unsigned threads_from_env() {
    const char* value = std::getenv("NETRESAMPLE_THREADS");
    if (!value || !*value)
        return 0;
    char* end = nullptr;
    const unsigned long n = std::strtoul(value, &end, 10);
    return (*end == '\0') ? static_cast<unsigned>(n) : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subsampling-based inference for network models"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    const std::map<std::string, std::string> about{
        {"generate", "draw graphs from a model spec"},
        {"subsample", "subsample distribution of statistics for an observed graph"},
        {"gof", "goodness of fit of models against an observed graph"},
        {"select", "kNN model selection on subsample features"},
        {"compare", "compare two observed networks at a common subsample size"},
        {"table1", "expected KS between full and subsample G(n,p) statistics"},
        {"stability", "degree distributions of grown models for several seed sizes"},
    };
    for (const auto& name : netresample::command_names()) {
        const auto it = about.find(name);
        auto* sub = app.add_subcommand(name, it == about.end() ? "" : it->second);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config \"out\")");
        sub->add_option("--seed", seed, "master seed (overrides config \"seed\")");
        sub->add_option("--threads", threads, "worker threads; default $NETRESAMPLE_THREADS or all cores");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    const auto* sub = app.get_subcommands().front();
    try {
        std::ifstream in(config_path);
        if (!in)
            throw netresample::ConfigError("cannot read config '" + config_path + "'");
        nlohmann::json config;
        try {
            config = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw netresample::ConfigError(config_path + ": " + e.what());
        }

        netresample::CommandOptions options;
        options.base_dir = std::filesystem::path(config_path).parent_path();
        if (sub->count("--out"))
            options.out_dir = out_dir;
        if (sub->count("--seed"))
            options.seed = seed;
        netresample::set_worker_count(sub->count("--threads") ? threads : threads_from_env());

        const auto result = netresample::run_command(command, config, options);
        for (const auto& name : result.artifacts)
            std::cout << (result.out_dir / name).string() << "\n";
        return 0;
    } catch (const netresample::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const netresample::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
