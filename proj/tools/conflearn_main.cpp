#include "conflearn/error.hpp"
#include "conflearn/harness.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Confounded learning experiments: validate, regions, simulate, fragility, approx"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    auto* config_opt = app.add_option("--config", config_path, "experiment config (JSON)")->required();
    auto* out_opt = app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "master seed, overrides the config");
    auto* threads_opt = app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    (void)config_opt;

    for (const char* verb : {"validate", "regions", "simulate", "fragility", "approx"}) {
        app.add_subcommand(verb);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : conflearn::exit_code::config_error;
    }

    const std::string verb = app.get_subcommands().front()->get_name();
    conflearn::ExperimentConfig config;
    conflearn::RunContext ctx;
    try {
        config = conflearn::load_config(config_path);
        ctx = conflearn::resolve_context(
            config, *out_opt ? std::optional<std::filesystem::path>(out_dir) : std::nullopt,
            *seed_opt ? std::optional<std::uint64_t>(seed) : std::nullopt,
            *threads_opt ? std::optional<unsigned>(threads) : std::nullopt, &std::cout);
    } catch (const conflearn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return conflearn::exit_code::config_error;
    }
    return conflearn::run_command(verb, config, ctx, std::cerr);
}
