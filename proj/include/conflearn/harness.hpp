#pragma once

#include "conflearn/serialization.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace conflearn {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr const char* kOutDirEnv = "CONFLEARN_OUT_DIR";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int validation_failed = 1;
inline constexpr int config_error = 2;
inline constexpr int precondition = 3;
inline constexpr int numerical = 4;
inline constexpr int internal = 5;
}  // namespace exit_code

struct ValidateSettings {
    double tol = 1e-8;
    std::size_t grid_points = 10000;
};

struct RegionsSettings {
    std::vector<double> shocks;  // empty: a uniform grid over the guarded admissible range
    std::size_t grid_points = 21;
};

struct SimulateSettings {
    double shock = 0.1;
    std::size_t horizon = 1000;
    std::size_t n_paths = 100;
    State true_state = State::A;
    double threshold = 0.01;
    std::size_t write_trajectories = 0;  // first k paths written as CSV
    std::size_t bins = 24;
};

struct FragilitySettings {
    std::size_t grid_size = 2000;
    double eps = 1e-6;
    double c_min = 0.01;
    std::size_t scan_points = 10000;
    double plateau_eps = 1e-10;
    bool include_plateaus = true;
    bool include_tangencies = false;
    std::size_t zero_resolution = 10000;
    std::size_t slack_cells = 5;
};

struct ApproxSettings {
    std::vector<std::size_t> degrees{4, 8, 16, 32};
    double a = -1.0;
    double b = 2.0;
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    ModelParams params;
    SignalSpec signal;
    std::optional<std::uint64_t> seed;
    std::string output_dir;
    unsigned threads = 1;
    ValidateSettings validate;
    RegionsSettings regions;
    SimulateSettings simulate;
    FragilitySettings fragility;
    ApproxSettings approx;
};

// Schema-checked parse. Throws ConfigError.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
Json to_json(const ExperimentConfig& c);

// Resolved run settings, after command-line overrides.
struct RunContext {
    std::filesystem::path out_dir;
    std::uint64_t seed = 0;
    bool seed_generated = false;
    unsigned threads = 1;
    std::ostream* log = nullptr;  // human-readable progress; may be null
};

// Output dir: explicit override, then config, then $CONFLEARN_OUT_DIR, then
// "conflearn_out". Seed: override, then config, then freshly generated.
RunContext resolve_context(const ExperimentConfig& config,
                           const std::optional<std::filesystem::path>& out_override,
                           const std::optional<std::uint64_t>& seed_override,
                           const std::optional<unsigned>& threads_override,
                           std::ostream* log = nullptr);

struct CommandResult {
    int exit_code = exit_code::ok;
    std::vector<std::filesystem::path> files;  // relative to out_dir, in write order
    std::filesystem::path manifest;
};

CommandResult cmd_validate(const ExperimentConfig& config, const RunContext& ctx);
CommandResult cmd_regions(const ExperimentConfig& config, const RunContext& ctx);
CommandResult cmd_simulate(const ExperimentConfig& config, const RunContext& ctx);
CommandResult cmd_fragility(const ExperimentConfig& config, const RunContext& ctx);
CommandResult cmd_approx(const ExperimentConfig& config, const RunContext& ctx);

// Dispatch by verb; maps library exceptions to exit codes and prints the
// message to `err`.
int run_command(const std::string& verb, const ExperimentConfig& config, const RunContext& ctx,
                std::ostream& err);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace conflearn
