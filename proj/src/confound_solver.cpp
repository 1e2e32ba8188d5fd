#include "conflearn/confound_solver.hpp"

#include "conflearn/error.hpp"
#include "conflearn/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace conflearn {

namespace {

double clamp_to(const Support& s, double x) { return std::clamp(x, s.lo(), s.hi()); }

double integral_form(const SignalModel& signal, double m, double mm, double p) {
    const double hi = signal.support().hi();
    return p * signal.moment_cdf(m) + (1.0 - p) * (signal.moment_cdf(hi) - signal.moment_cdf(mm));
}

// Runs f(i) for i in [0, n) over contiguous chunks.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned k = 0; k < threads; ++k) {
        const std::size_t begin = k * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&f, begin, end] {
            for (std::size_t i = begin; i < end; ++i) f(i);
        });
    }
}

}  // namespace

GEvaluation g_eval(const SignalModel& signal, double lambda, double c, const ModelParams& params) {
    const Belief belief(lambda);
    const double m = cutoff_match(belief, c, params);
    const double mm = cutoff_mismatch(belief, c, params);
    const auto& sup = signal.support();
    auto escaped = [&](const char* name, double x) {
        std::ostringstream os;
        os << "lambda = " << lambda << " not in E_c for c = " << c << ": " << name << " = " << x
           << " escaped the support (" << sup.lo() << ", " << sup.hi() << ")";
        throw RegionError(os.str());
    };
    if (!(m > sup.lo() && m < sup.hi())) escaped("match cutoff m", m);
    if (!(mm > sup.lo() && mm < sup.hi())) escaped("mismatch cutoff mm", mm);

    const double p = params.p;
    const double value = integral_form(signal, m, mm, p);
    const double cdf_form =
        p * (signal.cdf(State::B, m) - signal.cdf(State::A, m)) +
        (1.0 - p) * ((1.0 - signal.cdf(State::B, mm)) - (1.0 - signal.cdf(State::A, mm)));
    return {lambda, c, value, std::abs(value - cdf_form)};
}

double g_value_clamped(const SignalModel& signal, double lambda, double c,
                       const ModelParams& params) {
    const Belief belief(lambda);
    const auto& sup = signal.support();
    const double m = clamp_to(sup, cutoff_match(belief, c, params));
    const double mm = clamp_to(sup, cutoff_mismatch(belief, c, params));
    return integral_form(signal, m, mm, params.p);
}

// ---- No-shock roots ---------------------------------------------------------

std::vector<double> NoShockRoots::candidates(bool include_tangencies, bool include_plateaus) const {
    std::vector<double> out;
    for (const auto& r : roots) {
        if (!r.tangency || include_tangencies) out.push_back(r.lambda);
    }
    if (include_plateaus) {
        for (const auto& pl : plateaus) out.insert(out.end(), pl.grid.begin(), pl.grid.end());
    }
    return out;
}

NoShockRoots find_roots_no_shock(const SignalModel& signal, const ModelParams& params,
                                 const RootScanOptions& options) {
    params.check();
    if (options.grid_points < 3) throw ParameterError("root scan needs at least 3 grid points");
    NoShockRoots out;
    out.e0 = confounding_region(0.0, params, signal.support());
    if (out.e0.empty()) throw PreconditionError("parameter tuple not meaningful: E_0 is empty");
    out.grid_points = options.grid_points;
    out.plateau_eps = options.plateau_eps;

    out.scan_lo = out.e0.lo;
    out.scan_hi = out.e0.hi;
    if (!(out.e0.lo > 0.0) || !std::isfinite(out.e0.hi)) {
        // Truncate to [lower / 10, 10 upper] using the belief bounds.
        const auto shocks = shock_set(params, signal.support());
        double lo_t = 1e-6, hi_t = 1e6;
        if (!shocks.empty()) {
            const auto b = lambda_bounds(params, shocks);
            lo_t = b.lo / 10.0;
            hi_t = b.hi * 10.0;
        }
        if (!(out.e0.lo > 0.0)) out.scan_lo = lo_t;
        if (!std::isfinite(out.e0.hi)) out.scan_hi = std::max(hi_t, 10.0 * out.scan_lo);
        out.truncated = true;
    }

    const auto grid = numeric::logspace(out.scan_lo, out.scan_hi, options.grid_points);
    const std::size_t n = grid.size();
    std::vector<double> g(n);
    parallel_for(n, options.threads,
                 [&](std::size_t i) { g[i] = g_value_clamped(signal, grid[i], 0.0, params); });
    auto G = [&](double lam) { return g_value_clamped(signal, lam, 0.0, params); };

    std::vector<bool> small(n), plateau(n, false);
    for (std::size_t i = 0; i < n; ++i) small[i] = std::abs(g[i]) < options.plateau_eps;
    for (std::size_t i = 0; i < n;) {
        if (!small[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && small[j + 1]) ++j;
        if (j > i) {
            Plateau pl{grid[i], grid[j], {grid.begin() + static_cast<long>(i), grid.begin() + static_cast<long>(j) + 1}};
            out.plateaus.push_back(std::move(pl));
            for (std::size_t k = i; k <= j; ++k) plateau[k] = true;
        }
        i = j + 1;
    }

    auto refine = [&](double lo, double hi) {
        const bool neg_lo = G(lo) < 0.0;
        const double xtol = options.xtol_rel * std::max(1.0, hi);
        const auto br = numeric::bisect_predicate([&](double x) { return (G(x) < 0.0) == neg_lo; },
                                                  lo, hi, xtol);
        NoShockRoot r;
        r.bracket_lo = br.lo;
        r.bracket_hi = br.hi;
        r.lambda = 0.5 * (br.lo + br.hi);
        r.residual = G(r.lambda);
        return r;
    };

    for (std::size_t i = 0; i < n; ++i) {
        if (plateau[i]) continue;
        if (small[i]) {
            const bool interior = i > 0 && i + 1 < n;
            if (interior && g[i - 1] != 0.0 && (g[i - 1] < 0.0) != (g[i + 1] < 0.0)) {
                out.roots.push_back(refine(grid[i - 1], grid[i + 1]));
            } else {
                NoShockRoot r;
                r.lambda = grid[i];
                r.residual = g[i];
                r.bracket_lo = grid[i > 0 ? i - 1 : i];
                r.bracket_hi = grid[i + 1 < n ? i + 1 : i];
                r.tangency = true;
                out.roots.push_back(r);
            }
            continue;
        }
        if (i + 1 < n && !small[i + 1] && (g[i] < 0.0) != (g[i + 1] < 0.0)) {
            out.roots.push_back(refine(grid[i], grid[i + 1]));
        }
    }
    return out;
}

// ---- Joint system -----------------------------------------------------------

namespace {

// g0[i] = G(candidates[i], 0) when supplied, else computed on demand.
JointResult joint_solve_impl(const SignalModel& signal, const ModelParams& params,
                             const std::vector<double>& candidates, const std::vector<double>* g0s,
                             double c, double eps) {
    check_shock(c, params);
    JointResult res;
    res.c = c;
    const auto& sup = signal.support();
    const Interval both = intersect(confounding_region(0.0, params, sup),
                                    confounding_region(c, params, sup));
    if (both.empty()) {
        res.region_empty = true;
        return res;
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double lam = candidates[i];
        if (!both.contains(lam)) continue;
        const double gc = g_value_clamped(signal, lam, c, params);
        const double a = std::abs(gc);
        res.min_abs_g = res.min_abs_g ? std::min(*res.min_abs_g, a) : a;
        if (a > eps) continue;
        const double g0 = g0s ? (*g0s)[i] : g_value_clamped(signal, lam, 0.0, params);
        if (std::abs(g0) <= eps) res.solutions.push_back({lam, g0, gc});
    }
    return res;
}

}  // namespace

JointResult joint_solve(const SignalModel& signal, const ModelParams& params,
                        const std::vector<double>& candidates, double c, double eps) {
    return joint_solve_impl(signal, params, candidates, nullptr, c, eps);
}

JointResult joint_solve(const SignalModel& signal, const ModelParams& params,
                        const NoShockRoots& roots, double c, double eps) {
    return joint_solve(signal, params, roots.candidates(), c, eps);
}

// ---- Stationary sweep -------------------------------------------------------

std::optional<double> StationaryReport::min_abs_g() const {
    std::optional<double> out;
    for (const auto& r : grid) {
        if (r.min_abs_g) out = out ? std::min(*out, *r.min_abs_g) : *r.min_abs_g;
    }
    return out;
}

StationaryReport stationary_sweep(const SignalModel& signal, const ModelParams& params,
                                  const SweepOptions& options) {
    if (options.grid_size < 1) throw ParameterError("grid_size must be at least 1");
    if (!(options.eps >= 0.0)) throw ParameterError("eps must be nonnegative");
    if (!(options.c_min >= 0.0)) throw ParameterError("c_min must be nonnegative");

    StationaryReport rep;
    rep.signal = signal.spec();
    rep.params = params;
    rep.shocks = shock_set(params, signal.support());
    if (rep.shocks.empty()) {
        throw PreconditionError("shock set C_eps0 is empty" +
                                (rep.shocks.warning.empty() ? "" : ": " + rep.shocks.warning));
    }
    rep.c_min = options.c_min;
    rep.eps = options.eps;
    rep.grid_size = options.grid_size;
    rep.include_plateaus = options.include_plateaus;
    rep.include_tangencies = options.include_tangencies;

    std::vector<std::pair<double, double>> segments;
    for (const auto& piece : rep.shocks.pieces) {
        double a = piece.lo, b = piece.hi;
        if (b <= 0.0) b = std::min(b, -options.c_min);
        if (a >= 0.0) a = std::max(a, options.c_min);
        if (b > a) segments.emplace_back(a, b);
    }
    for (const auto& [a, b] : segments) rep.swept_length += b - a;
    if (!(rep.swept_length > 0.0)) {
        throw PreconditionError("dead zone covers the whole shock set");
    }
    rep.spacing = rep.swept_length / static_cast<double>(options.grid_size);

    std::vector<double> cs(options.grid_size);
    std::vector<std::size_t> seg_of(options.grid_size);
    for (std::size_t k = 0; k < options.grid_size; ++k) {
        double x = (static_cast<double>(k) + 0.5) * rep.spacing;
        std::size_t s = 0;
        while (s + 1 < segments.size() && x >= segments[s].second - segments[s].first) {
            x -= segments[s].second - segments[s].first;
            ++s;
        }
        cs[k] = std::min(segments[s].first + x, std::nextafter(segments[s].second, segments[s].first));
        seg_of[k] = s;
    }

    rep.no_shock = find_roots_no_shock(signal, params, options.scan);
    const auto candidates =
        rep.no_shock.candidates(options.include_tangencies, options.include_plateaus);
    std::vector<double> g0s(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        g0s[i] = g_value_clamped(signal, candidates[i], 0.0, params);
    }
    rep.grid.resize(options.grid_size);
    parallel_for(options.grid_size, options.threads, [&](std::size_t k) {
        rep.grid[k] = joint_solve_impl(signal, params, candidates, &g0s, cs[k], options.eps);
    });

    for (const auto& r : rep.grid) {
        if (!r.solutions.empty()) ++rep.passing;
    }
    rep.passing_fraction = static_cast<double>(rep.passing) / static_cast<double>(options.grid_size);
    rep.measure = rep.passing_fraction * rep.swept_length;

    // Sign changes of c -> G(lambda, c) between adjacent grid shocks.
    const auto& sup = signal.support();
    const Interval e0 = confounding_region(0.0, params, sup);
    auto admissible = [&](double lam, double c) {
        return e0.contains(lam) && confounding_region(c, params, sup).contains(lam);
    };
    for (const auto& root : rep.no_shock.roots) {
        if (root.tangency && !options.include_tangencies) continue;
        const double lam = root.lambda;
        for (std::size_t k = 0; k + 1 < cs.size(); ++k) {
            if (seg_of[k] != seg_of[k + 1]) continue;
            if (!admissible(lam, cs[k]) || !admissible(lam, cs[k + 1])) continue;
            const double ga = g_value_clamped(signal, lam, cs[k], params);
            const double gb = g_value_clamped(signal, lam, cs[k + 1], params);
            if (ga == 0.0 || gb == 0.0 || (ga < 0.0) == (gb < 0.0)) continue;
            auto G = [&](double c) { return g_value_clamped(signal, lam, c, params); };
            const bool neg = ga < 0.0;
            const auto br = numeric::bisect_predicate(
                [&](double c) { return (G(c) < 0.0) == neg; }, cs[k], cs[k + 1], 1e-12);
            const double c = 0.5 * (br.lo + br.hi);
            rep.crossings.push_back({lam, c, G(c)});
        }
    }
    return rep;
}

// ---- Belief-bound cross-check ---------------------------------------------------

namespace {

// Largest d in [0, room] with int |g(1 - 2s)| over the d-neighbourhood of
// `edge` (towards `dir`) at most `budget`.
double moment_excursion(const SignalModel& signal, double edge, int dir, double room,
                        double budget) {
    if (!(room > 0.0)) return 0.0;
    auto mass = [&](double d) {
        const double a = dir < 0 ? edge - d : edge;
        const double b = dir < 0 ? edge : edge + d;
        return numeric::integrate(
                   [&](double s) { return std::abs(signal.over_s(s) * (1.0 - 2.0 * s)); }, a, b,
                   1e-12)
            .value;
    };
    if (mass(room) <= budget) return room;
    return numeric::bisect_predicate([&](double d) { return mass(d) <= budget; }, 0.0, room,
                                     1e-12)
        .lo;
}

}  // namespace

BoundAnnotation lambda_bound_check(const SignalModel& signal, const ModelParams& params,
                                   const StationaryReport& report,
                                   const BoundCheckOptions& options) {
    BoundAnnotation ann;
    if (report.shocks.empty()) return ann;
    ann.bounds = lambda_bounds(params, report.shocks);
    ann.zero_interval = is_locally_zero(signal, options.resolution);
    const auto& sup = signal.support();
    const double cells = static_cast<double>(options.slack_cells) * sup.width() /
                         static_cast<double>(options.resolution);
    if (ann.zero_interval) {
        const double budget = report.eps / std::min(params.p, 1.0 - params.p);
        const auto& z = *ann.zero_interval;
        ann.slack_lo = std::max(cells, moment_excursion(signal, z.lo, -1, z.lo - sup.lo(), budget));
        ann.slack_hi = std::max(cells, moment_excursion(signal, z.hi, +1, sup.hi() - z.hi, budget));
    }

    auto check = [&](double c, const std::vector<double>& lambdas) {
        for (bool below : {true, false}) {
            BoundFlag flag;
            flag.c = c;
            flag.below = below;
            flag.cutoff_lo = kInf;
            flag.cutoff_hi = -kInf;
            for (double lam : lambdas) {
                if (below ? !(lam < ann.bounds.lo) : !(lam > ann.bounds.hi)) continue;
                const Belief belief(lam);
                // m rises and mm falls in c, so the extremes over [0, c] sit at the ends.
                for (double x : {cutoff_match(belief, 0.0, params), cutoff_match(belief, c, params),
                                 cutoff_mismatch(belief, 0.0, params),
                                 cutoff_mismatch(belief, c, params)}) {
                    flag.cutoff_lo = std::min(flag.cutoff_lo, x);
                    flag.cutoff_hi = std::max(flag.cutoff_hi, x);
                }
                flag.lambda_lo = flag.count == 0 ? lam : std::min(flag.lambda_lo, lam);
                flag.lambda_hi = flag.count == 0 ? lam : std::max(flag.lambda_hi, lam);
                ++flag.count;
            }
            if (flag.count == 0) continue;
            flag.locally_zero_ok = ann.zero_interval &&
                                   ann.zero_interval->lo - ann.slack_lo <= flag.cutoff_lo &&
                                   flag.cutoff_hi <= ann.zero_interval->hi + ann.slack_hi;
            if (!flag.locally_zero_ok) {
                std::ostringstream os;
                os << "numerical inconsistency at c = " << c << ": " << flag.count
                   << " confounded belief(s) in [" << flag.lambda_lo << ", " << flag.lambda_hi
                   << "] lie " << (below ? "below" : "above")
                   << " the belief bound but the cutoff range [" << flag.cutoff_lo << ", "
                   << flag.cutoff_hi << "] is not inside a zero interval of f";
                ann.warnings.push_back(os.str());
            }
            ann.flags.push_back(flag);
        }
    };
    for (const auto& r : report.grid) {
        std::vector<double> lambdas;
        for (const auto& s : r.solutions) lambdas.push_back(s.lambda);
        if (!lambdas.empty()) check(r.c, lambdas);
    }
    for (const auto& x : report.crossings) check(x.c, {x.lambda});
    return ann;
}

}  // namespace conflearn
