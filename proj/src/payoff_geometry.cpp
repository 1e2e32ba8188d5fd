#include "conflearn/payoff_geometry.hpp"

#include "conflearn/error.hpp"
#include "conflearn/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conflearn {

void ModelParams::check() const {
    std::ostringstream os;
    if (!(p > 0.0 && p < 1.0)) os << "p must lie in (0, 1); ";
    if (!(u > 0.0) || !std::isfinite(u)) os << "u must be positive; ";
    if (!(v > 0.0) || !std::isfinite(v)) os << "v must be positive; ";
    if (u == v) os << "u and v must differ; ";
    if (!(q >= 0.0 && q <= 1.0)) os << "q must lie in [0, 1]; ";
    if (!(eps0 > 0.0) || !std::isfinite(eps0)) os << "eps0 must be positive; ";
    const auto msg = os.str();
    if (!msg.empty()) throw ParameterError("invalid model parameters: " + msg.substr(0, msg.size() - 2));
}

ModelParams make_params(double p, double u, double v, double q, double eps0) {
    ModelParams params{p, u, v, q, eps0};
    params.check();
    return params;
}

Belief::Belief(double lambda) : lambda_(lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        std::ostringstream os;
        os << "belief must be positive and finite, got " << lambda;
        throw DomainError(os.str());
    }
}

Interval intersect(const Interval& a, const Interval& b) noexcept {
    if (a.empty() || b.empty()) return Interval::none();
    Interval out;
    if (a.lo > b.lo) {
        out.lo = a.lo;
        out.open_lo = a.open_lo;
    } else if (b.lo > a.lo) {
        out.lo = b.lo;
        out.open_lo = b.open_lo;
    } else {
        out.lo = a.lo;
        out.open_lo = a.open_lo || b.open_lo;
    }
    if (a.hi < b.hi) {
        out.hi = a.hi;
        out.open_hi = a.open_hi;
    } else if (b.hi < a.hi) {
        out.hi = b.hi;
        out.open_hi = b.open_hi;
    } else {
        out.hi = a.hi;
        out.open_hi = a.open_hi || b.open_hi;
    }
    return out.empty() ? Interval::none() : out;
}

bool contains(const IntervalSet& set, double x) noexcept {
    return std::any_of(set.begin(), set.end(), [x](const Interval& i) { return i.contains(x); });
}

bool intersects(const Interval& a, const IntervalSet& set) noexcept {
    return std::any_of(set.begin(), set.end(),
                       [&a](const Interval& i) { return !intersect(a, i).empty(); });
}

double total_length(const IntervalSet& set) noexcept {
    double acc = 0.0;
    for (const auto& i : set) acc += i.length();
    return acc;
}

// ---- Cutoffs -------------------------------------------------------------

Interval admissible_shocks(const ModelParams& params) {
    return Interval::open(std::max(-1.0, -params.v), std::min(params.u, 1.0));
}

namespace {

void check_match_shock(double c, const ModelParams& params) {
    if (!(c > -1.0 && c < params.u)) {
        std::ostringstream os;
        os << "shock c = " << c << " outside (-1, u) = (-1, " << params.u << ")";
        throw ParameterError(os.str());
    }
}

void check_mismatch_shock(double c, const ModelParams& params) {
    if (!(c > -params.v && c < 1.0)) {
        std::ostringstream os;
        os << "shock c = " << c << " outside (-v, 1) = (" << -params.v << ", 1)";
        throw ParameterError(os.str());
    }
}

}  // namespace

void check_shock(double c, const ModelParams& params) {
    check_match_shock(c, params);
    check_mismatch_shock(c, params);
}

double cutoff_match(Belief lambda, double c, const ModelParams& params) {
    check_match_shock(c, params);
    const double num = lambda.lambda() * (1.0 + c);
    return num / (num + (params.u - c));
}

double cutoff_mismatch(Belief lambda, double c, const ModelParams& params) {
    check_mismatch_shock(c, params);
    const double num = lambda.lambda() * (1.0 - c);
    return num / (num + (params.v + c));
}

CutoffDerivatives cutoff_derivatives(Belief lambda, double c, const ModelParams& params) {
    check_shock(c, params);
    const double l = lambda.lambda();
    const double dm = l * (1.0 + c) + (params.u - c);
    const double dmm = l * (1.0 - c) + (params.v + c);
    return {l * (params.u + 1.0) / (dm * dm), -l * (params.v + 1.0) / (dmm * dmm)};
}

double invert_match(double s, double c, const ModelParams& params) {
    check_match_shock(c, params);
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return kInf;
    return s * (params.u - c) / ((1.0 - s) * (1.0 + c));
}

double invert_mismatch(double s, double c, const ModelParams& params) {
    check_mismatch_shock(c, params);
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return kInf;
    return s * (params.v + c) / ((1.0 - s) * (1.0 - c));
}

// ---- Regions -------------------------------------------------------------

Interval match_active_region(double c, const ModelParams& params, const Support& support) {
    return Interval::open(invert_match(support.lo(), c, params),
                          invert_match(support.hi(), c, params));
}

Interval mismatch_active_region(double c, const ModelParams& params, const Support& support) {
    return Interval::open(invert_mismatch(support.lo(), c, params),
                          invert_mismatch(support.hi(), c, params));
}

Interval confounding_region(double c, const ModelParams& params, const Support& support) {
    return intersect(match_active_region(c, params, support),
                     mismatch_active_region(c, params, support));
}

IntervalSet non_herding_region(double c, const ModelParams& params, const Support& support) {
    Interval a = match_active_region(c, params, support);
    Interval b = mismatch_active_region(c, params, support);
    if (a.lo > b.lo) std::swap(a, b);
    // Open intervals merge only if they overlap; touching ones leave a point.
    if (b.lo < a.hi) return {Interval::open(a.lo, std::max(a.hi, b.hi))};
    return {a, b};
}

IntervalSet herding_region(double c, const ModelParams& params, const Support& support) {
    const IntervalSet active = non_herding_region(c, params, support);
    IntervalSet out;
    // Complement within (0, inf); the active pieces are open, so the
    // complement pieces are closed except at 0 and inf.
    double cursor = 0.0;
    bool cursor_open = true;
    for (const auto& piece : active) {
        Interval gap{cursor, piece.lo, cursor_open, false};
        if (!gap.empty()) out.push_back(gap);
        cursor = piece.hi;
        cursor_open = false;
    }
    if (cursor < kInf) out.push_back(Interval{cursor, kInf, cursor_open, true});
    return out;
}

RegionSet region_set(double c, const ModelParams& params, const Support& support) {
    return {c, confounding_region(c, params, support), herding_region(c, params, support),
            non_herding_region(c, params, support)};
}

const char* to_string(RegionKind k) noexcept {
    switch (k) {
        case RegionKind::confounding: return "confounding";
        case RegionKind::herding: return "herding";
        case RegionKind::single_active: return "single_active";
    }
    return "unknown";
}

RegionKind classify_belief(double lambda, const RegionSet& regions) {
    if (regions.confounding.contains(lambda)) return RegionKind::confounding;
    if (contains(regions.herding, lambda)) return RegionKind::herding;
    return RegionKind::single_active;
}

// ---- Shock set -------------------------------------------------------------

double ShockSet::inf() const {
    if (pieces.empty()) throw PreconditionError("shock set is empty");
    return pieces.front().lo;
}

double ShockSet::sup() const {
    if (pieces.empty()) throw PreconditionError("shock set is empty");
    return pieces.back().hi;
}

namespace {

// E_c is nonempty iff the match region starts below the end of the
// mismatch region and vice versa. The first condition is monotone
// increasing in c, the second monotone decreasing.
bool low_overlap(double c, const ModelParams& params, const Support& support) {
    return invert_match(support.lo(), c, params) < invert_mismatch(support.hi(), c, params);
}

bool high_overlap(double c, const ModelParams& params, const Support& support) {
    return invert_mismatch(support.lo(), c, params) < invert_match(support.hi(), c, params);
}

}  // namespace

ShockSet shock_set(const ModelParams& params, const Support& support) {
    params.check();
    if (confounding_region(0.0, params, support).empty()) {
        throw PreconditionError("parameter tuple not meaningful: E_0 is empty");
    }
    const double guard_lo = std::max(-1.0, -params.v) + params.eps0;
    const double guard_hi = std::min(params.u, 1.0) - params.eps0;

    ShockSet out;
    if (!(guard_lo < 0.0) || !(guard_hi > 0.0)) {
        out.warning = "eps0 empties the admissible shock range on at least one side of 0";
    }

    double lower = guard_lo;
    if (guard_lo < 0.0 && !low_overlap(guard_lo, params, support)) {
        const auto br = numeric::bisect_predicate(
            [&](double c) { return low_overlap(c, params, support); }, guard_lo, 0.0,
            kShockBoundaryTol);
        lower = br.hi;  // inner side keeps E_c nonempty
    }
    double upper = guard_hi;
    if (guard_hi > 0.0 && !high_overlap(guard_hi, params, support)) {
        const auto br = numeric::bisect_predicate(
            [&](double c) { return high_overlap(c, params, support); }, 0.0, guard_hi,
            kShockBoundaryTol);
        upper = br.lo;
    }
    if (lower < 0.0) out.pieces.push_back(Interval::open(lower, 0.0));
    if (upper > 0.0) out.pieces.push_back(Interval::open(0.0, upper));
    if (out.pieces.empty() && out.warning.empty()) {
        out.warning = "no shock keeps the confounding region nonempty";
    }
    return out;
}

LambdaBounds lambda_bounds(const ModelParams& params, const ShockSet& shocks) {
    if (shocks.empty()) throw PreconditionError("lambda_bounds: shock set is empty");
    const double lo_c = shocks.inf();
    const double hi_c = shocks.sup();
    const double u = params.u, v = params.v;
    const double lower = std::min((u - hi_c) / (1.0 + hi_c), (v + lo_c) / (1.0 - lo_c));
    const double upper = std::max((u - lo_c) / (1.0 + lo_c), (v + hi_c) / (1.0 - hi_c));
    return {lower, upper};
}

bool is_small_shock(double c, const ModelParams& params, const Support& support) {
    return !intersects(confounding_region(0.0, params, support),
                       herding_region(c, params, support));
}

std::optional<double> small_shock_boundary(const ModelParams& params, const Support& support,
                                           int direction) {
    const double edge = direction > 0 ? std::min(params.u, 1.0) - params.eps0
                                      : std::max(-1.0, -params.v) + params.eps0;
    if (direction > 0 ? !(edge > 0.0) : !(edge < 0.0)) return std::nullopt;
    auto small = [&](double c) { return is_small_shock(c, params, support); };
    if (small(edge)) return std::nullopt;
    // pred(0) holds, so the returned hi end is the first shock that is not small.
    return numeric::bisect_predicate(small, 0.0, edge, kShockBoundaryTol).hi;
}

}  // namespace conflearn
