#include "conflearn/harness.hpp"

#include "conflearn/error.hpp"
#include "conflearn/numeric.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace conflearn {

// ---- Config parsing -------------------------------------------------------------

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

double read_double(const Json& j, const char* key, double fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    return number_from_json(j.at(key), where + "." + key);
}

std::uint64_t read_uint(const Json& j, const char* key, std::uint64_t fallback,
                        const std::string& where) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_unsigned()) {
        throw ConfigError(where + "." + key + " must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

bool read_bool(const Json& j, const char* key, bool fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) throw ConfigError(where + "." + key + " must be a boolean");
    return j.at(key).get<bool>();
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

}  // namespace

ExperimentConfig parse_config(const Json& j) {
    reject_unknown(j, {"schema_version", "params", "signal", "seed", "output_dir", "threads",
                       "validate", "regions", "simulate", "fragility", "approx"},
                   "config");
    ExperimentConfig c;
    require(j.contains("schema_version"), "config.schema_version is required");
    require(j.at("schema_version").is_number_integer() &&
                j.at("schema_version").get<int>() == kSchemaVersion,
            "config.schema_version must be " + std::to_string(kSchemaVersion));
    if (j.contains("params")) c.params = params_from_json(j.at("params"));
    require(j.contains("signal"), "config.signal is required");
    c.signal = signal_from_json(j.at("signal"));
    if (j.contains("seed")) c.seed = read_uint(j, "seed", 0, "config");
    if (j.contains("output_dir")) {
        require(j.at("output_dir").is_string(), "config.output_dir must be a string");
        c.output_dir = j.at("output_dir").get<std::string>();
    }
    c.threads = static_cast<unsigned>(read_uint(j, "threads", 1, "config"));
    require(c.threads >= 1, "config.threads must be at least 1");

    if (j.contains("validate")) {
        const auto& s = j.at("validate");
        reject_unknown(s, {"tol", "grid_points"}, "validate");
        c.validate.tol = read_double(s, "tol", c.validate.tol, "validate");
        c.validate.grid_points = read_uint(s, "grid_points", c.validate.grid_points, "validate");
        require(c.validate.tol > 0.0, "validate.tol must be positive");
        require(c.validate.grid_points >= 2, "validate.grid_points must be at least 2");
    }
    if (j.contains("regions")) {
        const auto& s = j.at("regions");
        reject_unknown(s, {"shocks", "grid_points"}, "regions");
        if (s.contains("shocks")) {
            require(s.at("shocks").is_array(), "regions.shocks must be an array");
            for (const auto& x : s.at("shocks")) c.regions.shocks.push_back(number_from_json(x, "regions.shocks[]"));
        }
        c.regions.grid_points = read_uint(s, "grid_points", c.regions.grid_points, "regions");
        require(c.regions.grid_points >= 1, "regions.grid_points must be at least 1");
    }
    if (j.contains("simulate")) {
        const auto& s = j.at("simulate");
        reject_unknown(s, {"shock", "horizon", "n_paths", "true_state", "threshold",
                           "write_trajectories", "bins"},
                       "simulate");
        auto& m = c.simulate;
        m.shock = read_double(s, "shock", m.shock, "simulate");
        m.horizon = read_uint(s, "horizon", m.horizon, "simulate");
        m.n_paths = read_uint(s, "n_paths", m.n_paths, "simulate");
        m.threshold = read_double(s, "threshold", m.threshold, "simulate");
        m.write_trajectories = read_uint(s, "write_trajectories", m.write_trajectories, "simulate");
        m.bins = read_uint(s, "bins", m.bins, "simulate");
        if (s.contains("true_state")) {
            const auto& v = s.at("true_state");
            require(v.is_string() && (v == "A" || v == "B"), "simulate.true_state must be \"A\" or \"B\"");
            m.true_state = v == "A" ? State::A : State::B;
        }
        require(m.horizon >= 1, "simulate.horizon must be at least 1");
        require(m.n_paths >= 1, "simulate.n_paths must be at least 1");
        require(m.bins >= 1, "simulate.bins must be at least 1");
        require(m.write_trajectories <= m.n_paths, "simulate.write_trajectories exceeds n_paths");
        require(m.threshold > 0.0, "simulate.threshold must be positive");
    }
    if (j.contains("fragility")) {
        const auto& s = j.at("fragility");
        reject_unknown(s, {"grid_size", "eps", "c_min", "scan_points", "plateau_eps",
                           "include_plateaus", "include_tangencies", "zero_resolution",
                           "slack_cells"},
                       "fragility");
        auto& f = c.fragility;
        f.grid_size = read_uint(s, "grid_size", f.grid_size, "fragility");
        f.eps = read_double(s, "eps", f.eps, "fragility");
        f.c_min = read_double(s, "c_min", f.c_min, "fragility");
        f.scan_points = read_uint(s, "scan_points", f.scan_points, "fragility");
        f.plateau_eps = read_double(s, "plateau_eps", f.plateau_eps, "fragility");
        f.include_plateaus = read_bool(s, "include_plateaus", f.include_plateaus, "fragility");
        f.include_tangencies = read_bool(s, "include_tangencies", f.include_tangencies, "fragility");
        f.zero_resolution = read_uint(s, "zero_resolution", f.zero_resolution, "fragility");
        f.slack_cells = read_uint(s, "slack_cells", f.slack_cells, "fragility");
        require(f.grid_size >= 1, "fragility.grid_size must be at least 1");
        require(f.eps >= 0.0, "fragility.eps must be nonnegative");
        require(f.c_min >= 0.0, "fragility.c_min must be nonnegative");
        require(f.scan_points >= 3, "fragility.scan_points must be at least 3");
        require(f.zero_resolution >= 3, "fragility.zero_resolution must be at least 3");
    }
    if (j.contains("approx")) {
        const auto& s = j.at("approx");
        reject_unknown(s, {"degrees", "a", "b"}, "approx");
        if (s.contains("degrees")) {
            require(s.at("degrees").is_array() && !s.at("degrees").empty(),
                    "approx.degrees must be a nonempty array");
            c.approx.degrees.clear();
            for (const auto& d : s.at("degrees")) {
                require(d.is_number_unsigned(), "approx.degrees[] must be nonnegative integers");
                c.approx.degrees.push_back(d.get<std::size_t>());
            }
        }
        c.approx.a = read_double(s, "a", c.approx.a, "approx");
        c.approx.b = read_double(s, "b", c.approx.b, "approx");
    }
    return c;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

Json to_json(const ExperimentConfig& c) {
    Json j;
    j["schema_version"] = c.schema_version;
    j["params"] = to_json(c.params);
    j["signal"] = to_json(c.signal);
    if (c.seed) j["seed"] = *c.seed;
    if (!c.output_dir.empty()) j["output_dir"] = c.output_dir;
    j["threads"] = c.threads;
    j["validate"] = Json{{"tol", c.validate.tol}, {"grid_points", c.validate.grid_points}};
    Json shocks = Json::array();
    for (double x : c.regions.shocks) shocks.push_back(x);
    j["regions"] = Json{{"shocks", shocks}, {"grid_points", c.regions.grid_points}};
    const auto& m = c.simulate;
    j["simulate"] = Json{{"shock", m.shock},
                         {"horizon", m.horizon},
                         {"n_paths", m.n_paths},
                         {"true_state", to_string(m.true_state)},
                         {"threshold", m.threshold},
                         {"write_trajectories", m.write_trajectories},
                         {"bins", m.bins}};
    const auto& f = c.fragility;
    j["fragility"] = Json{{"grid_size", f.grid_size},
                          {"eps", f.eps},
                          {"c_min", f.c_min},
                          {"scan_points", f.scan_points},
                          {"plateau_eps", f.plateau_eps},
                          {"include_plateaus", f.include_plateaus},
                          {"include_tangencies", f.include_tangencies},
                          {"zero_resolution", f.zero_resolution},
                          {"slack_cells", f.slack_cells}};
    j["approx"] = Json{{"degrees", c.approx.degrees}, {"a", c.approx.a}, {"b", c.approx.b}};
    return j;
}

RunContext resolve_context(const ExperimentConfig& config,
                           const std::optional<fs::path>& out_override,
                           const std::optional<std::uint64_t>& seed_override,
                           const std::optional<unsigned>& threads_override, std::ostream* log) {
    RunContext ctx;
    ctx.log = log;
    if (out_override) {
        ctx.out_dir = *out_override;
    } else if (!config.output_dir.empty()) {
        ctx.out_dir = config.output_dir;
    } else if (const char* env = std::getenv(kOutDirEnv); env && *env) {
        ctx.out_dir = env;
    } else {
        ctx.out_dir = "conflearn_out";
    }
    if (seed_override) {
        ctx.seed = *seed_override;
    } else if (config.seed) {
        ctx.seed = *config.seed;
    } else {
        std::random_device rd;
        ctx.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        ctx.seed_generated = true;
        if (log) *log << "generated seed " << ctx.seed << "\n";
    }
    ctx.threads = threads_override ? *threads_override : config.threads;
    if (ctx.threads < 1) throw ConfigError("threads must be at least 1");
    return ctx;
}

// ---- Checksums --------------------------------------------------------------------

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* md = EVP_MD_CTX_new();
    if (!md || EVP_DigestInit_ex(md, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(md, bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(md, digest, &len) != 1) {
        EVP_MD_CTX_free(md);
        throw Error("sha256 failed");
    }
    EVP_MD_CTX_free(md);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) {
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return os.str();
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return sha256_hex(os.str());
}

// ---- Output plumbing ----------------------------------------------------------------

namespace {

class Outputs {
public:
    Outputs(const RunContext& ctx, std::string verb) : ctx_(ctx), verb_(std::move(verb)) {
        fs::create_directories(ctx_.out_dir);
    }

    void write(const fs::path& rel, const std::string& content) {
        const fs::path full = ctx_.out_dir / rel;
        if (full.has_parent_path()) fs::create_directories(full.parent_path());
        std::ofstream out(full, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + full.string());
        out << content;
        out.close();
        if (!out) throw Error("write failed for " + full.string());
        files_.push_back(rel);
        sums_.push_back(sha256_hex(content));
        sizes_.push_back(content.size());
    }

    void write_json(const fs::path& rel, const Json& j) { write(rel, j.dump(2) + "\n"); }

    CommandResult finish(const ExperimentConfig& config, int code) {
        Json files = Json::array();
        for (std::size_t i = 0; i < files_.size(); ++i) {
            files.push_back(Json{{"path", files_[i].generic_string()}, {"sha256", sums_[i]}, {"bytes", sizes_[i]}});
        }
        Json manifest{{"artifact_version", kArtifactVersion},
                      {"schema_version", kSchemaVersion},
                      {"command", verb_},
                      {"config_hash", sha256_hex(to_json(config).dump())},
                      {"timestamp", timestamp()},
                      {"seed", ctx_.seed},
                      {"seed_generated", ctx_.seed_generated},
                      {"threads", ctx_.threads},
                      {"exit_code", code},
                      {"files", files}};
        const fs::path rel = verb_ + "_manifest.json";
        std::ofstream out(ctx_.out_dir / rel, std::ios::binary | std::ios::trunc);
        out << manifest.dump(2) << "\n";
        if (!out) throw Error("cannot write manifest");
        return {code, files_, rel};
    }

    std::ostream* log() const { return ctx_.log; }

private:
    static std::string timestamp() {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    const RunContext& ctx_;
    std::string verb_;
    std::vector<fs::path> files_;
    std::vector<std::string> sums_;
    std::vector<std::size_t> sizes_;
};

template <class... Args>
void say(const Outputs& out, const Args&... args) {
    if (auto* log = out.log()) {
        ((*log) << ... << args);
        *log << "\n";
    }
}

SignalModel build_signal(const SignalSpec& spec) {
    try {
        return SignalModel::from_spec(spec);
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("signal: ") + e.what());
    }
}

}  // namespace

// ---- Commands -------------------------------------------------------------------------

CommandResult cmd_validate(const ExperimentConfig& config, const RunContext& ctx) {
    config.params.check();
    Outputs out(ctx, "validate");
    const auto model = build_signal(config.signal);
    ValidationOptions opt;
    opt.grid_points = config.validate.grid_points;
    const auto report = validate(model, config.validate.tol, opt);
    out.write_json("validate_report.json",
                   Json{{"signal", to_json(config.signal)}, {"tol", config.validate.tol},
                        {"report", to_json(report)}});
    if (report.pass) {
        say(out, "validate: pass (", config.signal.family, ")");
    } else {
        std::string names;
        for (const auto& f : report.failures()) names += (names.empty() ? "" : ", ") + f;
        say(out, "validate: FAIL, violated: ", names);
    }
    return out.finish(config, report.pass ? exit_code::ok : exit_code::validation_failed);
}

CommandResult cmd_regions(const ExperimentConfig& config, const RunContext& ctx) {
    config.params.check();
    Outputs out(ctx, "regions");
    const auto& params = config.params;
    const auto& sup = config.signal.support;
    const auto e0 = confounding_region(0.0, params, sup);
    if (e0.empty()) {
        throw PreconditionError("parameter tuple not meaningful: E_0 is empty for support (" +
                                format_double(sup.lo()) + ", " + format_double(sup.hi()) + ")");
    }
    const auto shocks = shock_set(params, sup);

    std::vector<double> cs = config.regions.shocks;
    if (cs.empty()) {
        const Interval adm = admissible_shocks(params);
        const double lo = adm.lo + params.eps0, hi = adm.hi - params.eps0;
        cs = lo < hi ? numeric::linspace(lo, hi, config.regions.grid_points)
                     : std::vector<double>{};
    }

    std::ostringstream csv_text;
    CsvWriter csv(csv_text, {"c", "in_shock_set", "e_c", "h_c", "nh_c", "e0_cap_e_c", "small_shock"});
    Json rows = Json::array();
    for (double c : cs) {
        const auto rs = region_set(c, params, sup);
        const auto both = intersect(e0, rs.confounding);
        const bool small = is_small_shock(c, params, sup);
        csv << c << shocks.contains(c) << format_interval(rs.confounding)
            << format_interval_set(rs.herding) << format_interval_set(rs.non_herding)
            << format_interval(both) << small;
        csv.end_row();
        rows.push_back(Json{{"c", c},
                            {"in_shock_set", shocks.contains(c)},
                            {"e_c", to_json(rs.confounding)},
                            {"h_c", to_json(rs.herding)},
                            {"small_shock", small}});
    }

    const auto r0 = region_set(0.0, params, sup);
    Json report{{"params", to_json(params)},
                {"signal", to_json(config.signal)},
                {"support_class", to_string(sup.classification())},
                {"e0", to_json(e0)},
                {"h0", to_json(r0.herding)},
                {"nh0", to_json(r0.non_herding)},
                {"shock_set", to_json(shocks)}};
    if (!shocks.empty()) report["lambda_bounds"] = to_json(lambda_bounds(params, shocks));
    for (int dir : {-1, 1}) {
        const auto b = small_shock_boundary(params, sup, dir);
        report[dir < 0 ? "small_shock_boundary_neg" : "small_shock_boundary_pos"] =
            b ? Json(*b) : Json(nullptr);
    }
    report["rows"] = rows;

    out.write("regions.csv", csv_text.str());
    out.write_json("regions_report.json", report);
    say(out, "regions: E_0 = ", format_interval(e0), ", H_0 = ", format_interval_set(r0.herding));
    say(out, "regions: C_eps0 = ", format_interval_set(shocks.pieces));
    if (!shocks.warning.empty()) say(out, "regions: warning: ", shocks.warning);
    return out.finish(config, exit_code::ok);
}

CommandResult cmd_simulate(const ExperimentConfig& config, const RunContext& ctx) {
    config.params.check();
    Outputs out(ctx, "simulate");
    const auto model = build_signal(config.signal);
    const auto& s = config.simulate;
    LimitOptions opt;
    opt.threshold = s.threshold;
    opt.bins = s.bins;
    opt.threads = ctx.threads;
    const auto summary = estimate_limit_distribution(config.params, model, s.true_state, s.shock,
                                                     s.horizon, s.n_paths, ctx.seed, opt);

    for (std::size_t i = 0; i < s.write_trajectories; ++i) {
        const auto traj = simulate_trajectory(config.params, model, s.true_state, s.shock, s.horizon,
                                              ctx.seed, i);
        std::ostringstream os;
        write_trajectory_csv(os, traj);
        std::ostringstream name;
        name << "trajectories/path_" << std::setw(5) << std::setfill('0') << i << ".csv";
        out.write(name.str(), os.str());
    }

    std::ostringstream hist;
    {
        CsvWriter csv(hist, {"log10_lo", "log10_hi", "count"});
        const auto& h = summary.histogram;
        const double width = (h.hi - h.lo) / static_cast<double>(h.counts.size());
        csv << -kInf << h.lo << h.underflow;
        csv.end_row();
        for (std::size_t k = 0; k < h.counts.size(); ++k) {
            csv << h.lo + width * static_cast<double>(k) << h.lo + width * static_cast<double>(k + 1)
                << h.counts[k];
            csv.end_row();
        }
        csv << h.hi << kInf << h.overflow;
        csv.end_row();
    }
    out.write("simulate_histogram.csv", hist.str());

    std::ostringstream finals;
    {
        CsvWriter csv(finals, {"path", "lambda_T"});
        for (std::size_t i = 0; i < summary.final_lambdas.size(); ++i) {
            csv << i << summary.final_lambdas[i];
            csv.end_row();
        }
    }
    out.write("simulate_final_lambda.csv", finals.str());
    out.write_json("simulate_summary.json", Json{{"params", to_json(config.params)},
                                                 {"signal", to_json(config.signal)},
                                                 {"seed", ctx.seed},
                                                 {"summary", to_json(summary)}});
    say(out, "simulate: ", summary.n_paths, " paths, horizon ", summary.horizon,
        ", fraction lambda_T < ", summary.threshold, ": ", summary.fraction_below,
        ", mean lambda_T ", summary.mean, " (se ", summary.std_error, ")");
    return out.finish(config, exit_code::ok);
}

CommandResult cmd_fragility(const ExperimentConfig& config, const RunContext& ctx) {
    config.params.check();
    Outputs out(ctx, "fragility");
    const auto model = build_signal(config.signal);
    const auto& f = config.fragility;
    SweepOptions opt;
    opt.grid_size = f.grid_size;
    opt.eps = f.eps;
    opt.c_min = f.c_min;
    opt.include_plateaus = f.include_plateaus;
    opt.include_tangencies = f.include_tangencies;
    opt.threads = ctx.threads;
    opt.scan.grid_points = f.scan_points;
    opt.scan.plateau_eps = f.plateau_eps;
    opt.scan.threads = ctx.threads;
    const auto report = stationary_sweep(model, config.params, opt);
    const auto ann = lambda_bound_check(model, config.params, report,
                                        BoundCheckOptions{f.zero_resolution, f.slack_cells});

    std::ostringstream curve;
    {
        CsvWriter csv(curve, {"c", "min_abs_g", "passing", "n_solutions", "region_empty"});
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (const auto& r : report.grid) {
            csv << r.c << (r.min_abs_g ? *r.min_abs_g : nan) << !r.solutions.empty()
                << r.solutions.size() << r.region_empty;
            csv.end_row();
        }
    }
    std::ostringstream roots;
    {
        CsvWriter csv(roots, {"lambda", "residual", "bracket_lo", "bracket_hi", "tangency"});
        for (const auto& r : report.no_shock.roots) {
            csv << r.lambda << r.residual << r.bracket_lo << r.bracket_hi << r.tangency;
            csv.end_row();
        }
    }
    out.write("fragility_min_abs_g.csv", curve.str());
    out.write("fragility_roots.csv", roots.str());
    out.write_json("fragility_report.json",
                   Json{{"report", to_json(report)}, {"bound_check", to_json(ann)}});

    std::ostringstream rs;
    for (const auto& r : report.no_shock.roots) rs << (rs.tellp() > 0 ? ", " : "") << format_double(r.lambda);
    say(out, "fragility: no-shock roots {", rs.str(), "}, ", report.no_shock.plateaus.size(),
        " plateau(s)");
    say(out, "fragility: passing fraction ", report.passing_fraction, " at eps ", report.eps,
        ", measure estimate ", report.measure);
    say(out, "fragility: ", ann.flags.size(), " belief-bound flag(s), ", ann.warnings.size(),
        " warning(s)");
    for (const auto& w : ann.warnings) say(out, "fragility: warning: ", w);
    return out.finish(config, exit_code::ok);
}

CommandResult cmd_approx(const ExperimentConfig& config, const RunContext& ctx) {
    config.params.check();
    Outputs out(ctx, "approx");
    const auto target = build_signal(config.signal);
    ApproxOptions opt;
    opt.a = config.approx.a;
    opt.b = config.approx.b;
    const auto results = approximate_schedule(target, config.approx.degrees, opt);

    std::ostringstream curve;
    CsvWriter csv(curve, {"degree", "sup_error", "epsilon", "delta", "kappa", "alpha",
                          "alpha_residual", "g_hat_moment", "g_tilde_moment", "valid"});
    bool all_valid = true;
    for (const auto& r : results) {
        const auto& t = r.trace;
        csv << t.degree << t.sup_error << t.epsilon << t.projection.delta << t.projection.kappa
            << t.lifting.alpha << t.alpha_residual << t.g_hat_moment << t.projection.g_tilde_moment
            << t.validation.pass;
        csv.end_row();
        all_valid = all_valid && t.validation.pass;
        out.write_json("approx_trace_d" + std::to_string(t.degree) + ".json", to_json(t));
        say(out, "approx: degree ", t.degree, " sup error ", t.sup_error,
            t.validation.pass ? "" : " (output FAILS validation)");
    }
    out.write("approx_error.csv", curve.str());

    ExperimentConfig next = config;
    next.signal = results.back().trace.result;
    next.output_dir.clear();
    out.write_json("approx_signal.json", to_json(next));
    return out.finish(config, all_valid ? exit_code::ok : exit_code::validation_failed);
}

int run_command(const std::string& verb, const ExperimentConfig& config, const RunContext& ctx,
                std::ostream& err) {
    try {
        if (verb == "validate") return cmd_validate(config, ctx).exit_code;
        if (verb == "regions") return cmd_regions(config, ctx).exit_code;
        if (verb == "simulate") return cmd_simulate(config, ctx).exit_code;
        if (verb == "fragility") return cmd_fragility(config, ctx).exit_code;
        if (verb == "approx") return cmd_approx(config, ctx).exit_code;
        err << "unknown command '" << verb << "'\n";
        return exit_code::config_error;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_code::config_error;
    } catch (const ParameterError& e) {
        err << "parameter error: " << e.what() << "\n";
        return exit_code::config_error;
    } catch (const PreconditionError& e) {
        err << "precondition failed: " << e.what() << "\n";
        return exit_code::precondition;
    } catch (const RegionError& e) {
        err << "region error: " << e.what() << "\n";
        return exit_code::precondition;
    } catch (const EvaluationError& e) {
        err << "evaluation error: " << e.what() << "\n";
        return exit_code::numerical;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_code::numerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::internal;
    }
}

}  // namespace conflearn
