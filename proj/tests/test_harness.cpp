#include "conflearn/error.hpp"
#include "conflearn/harness.hpp"

#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace conflearn;
namespace fs = std::filesystem;

namespace {

Json base_config() {
    return Json::parse(R"({
      "schema_version": 1,
      "params": {"p": 0.5, "u": 2.0, "v": 1.0, "q": 0.5, "eps0": 0.05},
      "signal": {"family": "linear", "coefficients": [], "support": [0.0, 1.0]},
      "seed": 4242,
      "simulate": {"shock": 0.5, "horizon": 200, "n_paths": 16, "write_trajectories": 1},
      "fragility": {"grid_size": 100, "scan_points": 2000},
      "approx": {"degrees": [4, 8]}
    })");
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("conflearn_test_" + name);
    fs::remove_all(dir);
    return dir;
}

RunContext context(const fs::path& dir, unsigned threads = 1) {
    RunContext ctx;
    ctx.out_dir = dir;
    ctx.seed = 4242;
    ctx.threads = threads;
    return ctx;
}

Json read_json(const fs::path& p) {
    std::ifstream in(p);
    return Json::parse(in);
}

std::vector<std::string> checksums(const fs::path& manifest) {
    std::vector<std::string> out;
    for (const auto& f : read_json(manifest)["files"]) {
        out.push_back(f["path"].get<std::string>() + ":" + f["sha256"].get<std::string>());
    }
    return out;
}

}  // namespace

TEST_CASE("sha256") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(kInf) == "inf");
    CHECK(format_double(-kInf) == "-inf");
    CHECK(json_number(kInf) == Json("inf"));
    CHECK(number_from_json(Json("inf"), "x") == kInf);
    CHECK_THROWS_AS(number_from_json(Json("abc"), "x"), ConfigError);
    Interval i = Interval::open(0.5, kInf);
    CHECK(format_interval(i) == "(0.5;inf)");
    CHECK(format_interval(Interval::none()) == "empty");
}

TEST_CASE("config parsing is strict") {
    CHECK_NOTHROW(parse_config(base_config()));
    auto j = base_config();
    j["bogus"] = 1;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = base_config();
    j["simulate"]["shok"] = 0.1;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = base_config();
    j["schema_version"] = 2;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = base_config();
    j.erase("signal");
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = base_config();
    j["params"]["p"] = "half";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = base_config();
    j["params"]["extra"] = 1.0;
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    const auto c = parse_config(base_config());
    CHECK(parse_config(to_json(c)).simulate.n_paths == 16);
    CHECK(to_json(parse_config(to_json(c))) == to_json(c));
}

TEST_CASE("context resolution") {
    const auto c = parse_config(base_config());
    const auto ctx = resolve_context(c, fs::path("x"), std::nullopt, 3u);
    CHECK(ctx.out_dir == fs::path("x"));
    CHECK(ctx.seed == 4242);
    CHECK_FALSE(ctx.seed_generated);
    CHECK(ctx.threads == 3);

    auto j = base_config();
    j.erase("seed");
    std::ostringstream log;
    ::setenv(kOutDirEnv, "from_env", 1);
    const auto g = resolve_context(parse_config(j), std::nullopt, std::nullopt, std::nullopt, &log);
    ::unsetenv(kOutDirEnv);
    CHECK(g.seed_generated);
    CHECK(g.out_dir == fs::path("from_env"));
    CHECK(log.str().find(std::to_string(g.seed)) != std::string::npos);
}

TEST_CASE("exit codes") {
    std::ostringstream err;
    const auto dir = scratch("exit");
    auto j = base_config();
    CHECK(run_command("validate", parse_config(j), context(dir), err) == exit_code::ok);

    j["signal"] = Json::parse(R"({"family": "polynomial", "coefficients": [1.0], "support": [0.0, 1.0]})");
    err.str("");
    CHECK(run_command("validate", parse_config(j), context(dir), err) == exit_code::validation_failed);
    const auto report = read_json(dir / "validate_report.json");
    CHECK(report.dump().find("boundedness") != std::string::npos);
    CHECK(run_command("approx", parse_config(j), context(dir), err) == exit_code::numerical);

    j = base_config();
    j["params"]["u"] = 10.0;
    j["params"]["v"] = 0.1;
    j["signal"] = Json::parse(R"({"family": "truncated_linear", "coefficients": [], "support": [0.25, 0.75]})");
    CHECK(run_command("regions", parse_config(j), context(dir), err) == exit_code::precondition);
    CHECK(run_command("fragility", parse_config(j), context(dir), err) == exit_code::precondition);

    j = base_config();
    j["params"]["u"] = 1.0;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    auto c = parse_config(base_config());
    c.params.u = 1.0;
    CHECK(run_command("validate", c, context(dir), err) == exit_code::config_error);
    j = base_config();
    j["approx"]["degrees"] = Json::parse("[1]");
    CHECK(run_command("approx", parse_config(j), context(dir), err) == exit_code::config_error);
    CHECK(run_command("frobnicate", parse_config(base_config()), context(dir), err) ==
          exit_code::config_error);
    fs::remove_all(dir);
}

TEST_CASE("artifacts and manifest") {
    const auto dir = scratch("artifacts");
    const auto c = parse_config(base_config());
    const auto res = cmd_simulate(c, context(dir));
    CHECK(res.exit_code == exit_code::ok);
    CHECK(fs::exists(dir / "trajectories" / "path_00000.csv"));
    const auto m = read_json(dir / res.manifest);
    CHECK(m["command"] == "simulate");
    CHECK(m["seed"] == 4242);
    CHECK(m["schema_version"] == kSchemaVersion);
    CHECK(m["config_hash"] == sha256_hex(to_json(c).dump()));
    for (const auto& f : m["files"]) {
        CHECK(sha256_file(dir / f["path"].get<std::string>()) == f["sha256"]);
    }
    std::ifstream traj(dir / "trajectories" / "path_00000.csv");
    std::string header;
    std::getline(traj, header);
    CHECK(header == "t,chi,c_eff,type,signal,action,lambda_before,lambda_after");
    std::size_t rows = 0;
    for (std::string line; std::getline(traj, line);) ++rows;
    CHECK(rows == 200);
    fs::remove_all(dir);
}

TEST_CASE("byte-identical artifacts across runs and thread counts") {
    const auto c = parse_config(base_config());
    for (const std::string verb : {"simulate", "fragility", "regions"}) {
        const auto a = scratch(verb + "_a"), b = scratch(verb + "_b");
        std::ostringstream err;
        REQUIRE(run_command(verb, c, context(a, 1), err) == exit_code::ok);
        REQUIRE(run_command(verb, c, context(b, 3), err) == exit_code::ok);
        CHECK(checksums(a / (verb + "_manifest.json")) == checksums(b / (verb + "_manifest.json")));
        fs::remove_all(a);
        fs::remove_all(b);
    }
}

TEST_CASE("approx output round-trips into every command") {
    auto j = base_config();
    j["signal"] = Json::parse(R"({"family": "truncated_linear", "coefficients": [], "support": [0.25, 0.75]})");
    const auto dir = scratch("approx");
    REQUIRE(cmd_approx(parse_config(j), context(dir)).exit_code == exit_code::ok);
    const auto next = load_config(dir / "approx_signal.json");
    CHECK(next.signal.family == "lifted_chebyshev");
    std::ostringstream err;
    for (const std::string verb : {"validate", "regions", "simulate", "fragility", "approx"}) {
        CAPTURE(verb);
        const auto sub = scratch("approx_" + verb);
        CHECK(run_command(verb, next, context(sub), err) == exit_code::ok);
        fs::remove_all(sub);
    }
    CHECK(err.str().empty());
    fs::remove_all(dir);
}
