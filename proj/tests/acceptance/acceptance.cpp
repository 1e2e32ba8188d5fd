// Acceptance run: one line per criterion, PASS or FAIL, with its runtime
// against the allowed budget. Exit status is nonzero if any criterion fails.
//
//   acceptance [id ...]     run only the listed criteria

#include "conflearn/analytic_approx.hpp"
#include "conflearn/confound_solver.hpp"
#include "conflearn/harness.hpp"
#include "conflearn/learning_dynamics.hpp"
#include "conflearn/numeric.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace conflearn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
};

const ModelParams kLinear = make_params(0.5, 2.0, 1.0, 0.5, 0.05);

template <class... Ts>
std::string cat(const Ts&... xs) {
    std::ostringstream os;
    os.precision(6);
    (os << ... << xs);
    return os.str();
}

double log_uniform(RandomStream& rng, double lo, double hi) {
    return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

double guarded_shock(RandomStream& rng, const ModelParams& p) {
    const auto adm = admissible_shocks(p);
    return adm.lo + p.eps0 + rng.uniform() * (adm.hi - adm.lo - 2.0 * p.eps0);
}

unsigned hardware_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome martingale_identity() {
    RandomStream rng(1001);
    const auto f = SignalModel::linear();
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double u, v;
        do {
            u = 0.2 + 3.8 * rng.uniform();
            v = 0.2 + 3.8 * rng.uniform();
        } while (std::abs(u - v) < 0.05);
        const auto params = make_params(0.05 + 0.9 * rng.uniform(), u, v, 0.5, 0.05);
        const double lam = log_uniform(rng, 1e-4, 1e4);
        const double c = guarded_shock(rng, params);
        worst = std::max(worst, martingale_residual(Belief(lam), c, params, f) / lam);
    }
    return {worst <= 1e-10, cat("max residual / lambda = ", worst, " over 1000 triples")};
}

Outcome closed_form_root() {
    const auto roots = find_roots_no_shock(SignalModel::linear(), kLinear);
    std::size_t genuine = 0;
    for (const auto& r : roots.roots) genuine += !r.tangency;
    if (roots.roots.size() != 1 || genuine != 1 || !roots.plateaus.empty()) {
        return {false, cat(roots.roots.size(), " root(s), ", roots.plateaus.size(), " plateau(s)")};
    }
    const double err = std::abs(roots.roots.front().lambda - std::sqrt(2.0));
    return {err <= 1e-8, cat("one root, |lambda* - sqrt 2| = ", err)};
}

double linear_root() {
    return find_roots_no_shock(SignalModel::linear(), kLinear).roots.at(0).lambda;
}

Outcome uninformative_root() {
    const double lam = linear_root();
    const auto f = SignalModel::linear();
    const double la = likelihood_ratio(Action::a, Belief(lam), 0.0, kLinear, f).value;
    const double lb = likelihood_ratio(Action::b, Belief(lam), 0.0, kLinear, f).value;
    const double err = std::max(std::abs(la - 1.0), std::abs(lb - 1.0));
    return {err <= 1e-8, cat("|LR(a) - 1| = ", std::abs(la - 1.0), ", |LR(b) - 1| = ", std::abs(lb - 1.0))};
}

Outcome fragility_sweep() {
    SweepOptions opt;
    opt.grid_size = 2000;
    opt.eps = 1e-6;
    opt.c_min = 0.01;
    opt.threads = hardware_threads();
    const auto rep = stationary_sweep(SignalModel::linear(), kLinear, opt);
    const auto min_g = rep.min_abs_g();
    const bool pass = rep.grid.size() == 2000 && rep.passing == 0 && rep.measure == 0.0 && min_g &&
                      *min_g > 1e-6;
    return {pass, cat("passing fraction ", rep.passing_fraction, ", min |G| = ",
                      min_g ? *min_g : std::nan(""), ", measure ", rep.measure, ", ",
                      rep.crossings.size(), " isolated crossing(s) reported")};
}

Outcome derivative_signs() {
    const auto lams = numeric::logspace(1e-2, 1e2, 40);
    const auto adm = admissible_shocks(kLinear);
    const auto cs = numeric::linspace(adm.lo + kLinear.eps0, adm.hi - kLinear.eps0, 25);
    const double h = 1e-6;
    double worst = 0.0;
    bool signs = true;
    std::size_t n = 0;
    for (double lam : lams) {
        const Belief b(lam);
        for (double c : cs) {
            const auto d = cutoff_derivatives(b, c, kLinear);
            const double fm = (cutoff_match(b, c + h, kLinear) - cutoff_match(b, c - h, kLinear)) / (2 * h);
            const double fmm =
                (cutoff_mismatch(b, c + h, kLinear) - cutoff_mismatch(b, c - h, kLinear)) / (2 * h);
            worst = std::max({worst, std::abs(d.dm_dc - fm) / std::abs(d.dm_dc),
                              std::abs(d.dmm_dc - fmm) / std::abs(d.dmm_dc)});
            signs = signs && d.dm_dc > 0.0 && d.dmm_dc < 0.0;
            ++n;
        }
    }
    return {worst <= 1e-5 && signs,
            cat(n, " points, max rel. err ", worst, signs ? ", signs hold" : ", SIGN VIOLATION")};
}

Outcome region_geometry() {
    const Support sup(0.25, 0.75);
    const auto e0 = confounding_region(0.0, kLinear, sup);
    const auto h0 = herding_region(0.0, kLinear, sup);
    double err = std::max(std::abs(e0.lo - 2.0 / 3.0), std::abs(e0.hi - 3.0));
    bool shape = e0.open_lo && e0.open_hi && h0.size() == 2;
    if (h0.size() == 2) {
        err = std::max({err, std::abs(h0[0].lo), std::abs(h0[0].hi - 1.0 / 3.0), std::abs(h0[1].lo - 6.0)});
        shape = shape && !h0[0].open_hi && !h0[1].open_lo && std::isinf(h0[1].hi);
    }
    bool small = true;
    for (double c : numeric::linspace(-0.01, 0.01, 201)) small = small && is_small_shock(c, kLinear, sup);
    return {err <= 1e-12 && shape && small,
            cat("E0 = ", format_interval(e0), ", H0 = ", format_interval_set(h0), ", endpoint err ", err,
                small ? ", small for |c| <= 0.01" : ", NOT small somewhere in |c| <= 0.01")};
}

Outcome correct_learning() {
    const auto params = make_params(0.5, 2.0, 1.0, 0.9, 0.05);
    LimitOptions opt;
    opt.threshold = 0.01;
    opt.threads = hardware_threads();
    const auto s = estimate_limit_distribution(params, SignalModel::linear(), State::A, 0.9, 5000, 500,
                                               12345, opt);
    const bool below = s.fraction_below >= 0.95;
    const bool mean = std::abs(s.mean - 1.0) <= 3.0 * s.std_error;
    return {below && mean, cat("fraction lambda_T < 0.01: ", s.fraction_below, below ? " (ok)" : " (LOW)",
                               "; mean lambda_T ", s.mean, ", se ", s.std_error, ", |mean - 1| / se = ",
                               std::abs(s.mean - 1.0) / s.std_error, mean ? " (ok)" : " (> 3)")};
}

Outcome approximation_pipeline() {
    const auto tent = balanced_tent(Support(0.25, 0.75));
    const auto results = approximate_schedule(tent, {4, 8, 16, 32});
    bool valid = true, monotone = true;
    double worst_moment = 0.0, worst_alpha = 0.0, prev = kInf;
    std::ostringstream errs;
    for (const auto& r : results) {
        const auto& t = r.trace;
        valid = valid && validate(r.signal, 1e-8).pass;
        monotone = monotone && t.sup_error <= 1.1 * prev;
        prev = t.sup_error;
        worst_moment = std::max({worst_moment, std::abs(t.g_hat_moment), std::abs(t.projection.g_tilde_moment)});
        worst_alpha = std::max(worst_alpha, std::abs(t.alpha_residual));
        errs << (errs.tellp() > 0 ? " " : "") << t.sup_error;
    }
    return {valid && monotone && worst_moment <= 1e-9 && worst_alpha <= 1e-10,
            cat("sup errors [", errs.str(), "]", valid ? ", all valid" : ", INVALID output",
                ", moment residual ", worst_moment, ", alpha residual ", worst_alpha)};
}

Outcome cross_form() {
    RandomStream rng(909);
    const std::vector<SignalModel> models{SignalModel::linear(), SignalModel::truncated_linear(0.25)};
    double worst = 0.0;
    std::size_t n = 0;
    for (const auto& f : models) {
        std::size_t k = 0;
        while (k < 1000) {
            const double lam = log_uniform(rng, 1e-2, 1e2);
            const double c = guarded_shock(rng, kLinear);
            if (!confounding_region(c, kLinear, f.support()).contains(lam)) continue;
            const auto pr = action_probabilities(Belief(lam), c, kLinear, f);
            worst = std::max(worst, std::abs(g_eval(f, lam, c, kLinear).value - (pr.b_given_b - pr.b_given_a)));
            ++k;
        }
        n += k;
    }
    return {worst <= 1e-9, cat(n, " points over 2 signals, max |G - (Pr(b|B) - Pr(b|A))| = ", worst)};
}

std::vector<std::string> manifest_checksums(const fs::path& manifest) {
    std::ifstream in(manifest);
    const auto j = Json::parse(in);
    std::vector<std::string> out;
    for (const auto& f : j["files"]) {
        out.push_back(f["path"].get<std::string>() + " " + f["sha256"].get<std::string>());
    }
    return out;
}

Outcome determinism() {
    const auto config = parse_config(Json::parse(R"({
      "schema_version": 1,
      "params": {"p": 0.5, "u": 2.0, "v": 1.0, "q": 0.9, "eps0": 0.05},
      "signal": {"family": "linear", "coefficients": [], "support": [0.0, 1.0]},
      "seed": 12345,
      "simulate": {"shock": 0.9, "horizon": 1000, "n_paths": 100, "write_trajectories": 3},
      "fragility": {"grid_size": 2000, "eps": 1e-6, "c_min": 0.01}
    })"));
    const auto root = fs::temp_directory_path() / "conflearn_acceptance_determinism";
    fs::remove_all(root);
    std::size_t files = 0;
    std::string failure;
    for (const std::string verb : {"simulate", "fragility"}) {
        std::vector<std::vector<std::string>> sums;
        for (unsigned run = 0; run < 3; ++run) {
            RunContext ctx;
            ctx.out_dir = root / (verb + std::to_string(run));
            ctx.seed = 12345;
            ctx.threads = run == 2 ? 3 : 1;
            std::ostringstream err;
            const int code = run_command(verb, config, ctx, err);
            if (code != exit_code::ok) return {false, cat(verb, " exited with ", code, ": ", err.str())};
            sums.push_back(manifest_checksums(ctx.out_dir / (verb + "_manifest.json")));
        }
        files += sums[0].size();
        if (sums[0].empty()) failure += verb + " wrote no files; ";
        if (sums[0] != sums[1]) failure += verb + " differs between repeated runs; ";
        if (sums[0] != sums[2]) failure += verb + " differs between thread counts; ";
    }
    fs::remove_all(root);
    if (!failure.empty()) return {false, failure};
    return {true, cat(files, " artifacts identical over 3 runs each (1, 1 and 3 threads)")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "martingale identity", 10, martingale_identity},
        {2, "closed-form confounded belief", 5, closed_form_root},
        {3, "uninformative actions at the confounded belief", 5, uninformative_root},
        {4, "fragility sweep", 60, fragility_sweep},
        {5, "cutoff derivative signs", 5, derivative_signs},
        {6, "region geometry", 1, region_geometry},
        {7, "correct learning with an unbounded signal", 120, correct_learning},
        {8, "analytic approximation pipeline", 30, approximation_pipeline},
        {9, "cross-form consistency", 10, cross_form},
        {10, "determinism", 60, determinism},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = out.pass && in_time;
        failed += !pass;
        std::printf("%s  %2d  %s: %s [%.2f s of %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    out.detail.c_str(), secs, c.budget_s, in_time ? "" : ", OVER BUDGET");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
