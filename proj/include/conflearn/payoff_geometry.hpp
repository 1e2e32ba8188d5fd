#pragma once

#include "conflearn/signal_model.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace conflearn {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Economy parameters. p: probability a player is the match type. u, v:
// payoff parameters of the match and mismatch type (u != v). q: probability
// the payoff shock arrives in a period. eps0: guard keeping shocks away from
// the edges of admissibility.
struct ModelParams {
    double p = 0.5;
    double u = 2.0;
    double v = 1.0;
    double q = 0.5;
    double eps0 = 0.05;

    // Throws ParameterError on any violated invariant.
    void check() const;
};

ModelParams make_params(double p, double u, double v, double q = 0.5, double eps0 = 0.05);

// Public likelihood ratio Pr(B | h) / Pr(A | h); positive and finite.
class Belief {
public:
    explicit Belief(double lambda);
    double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool open_lo = true;
    bool open_hi = true;

    bool empty() const noexcept {
        return lo > hi || (lo == hi && (open_lo || open_hi));
    }
    bool contains(double x) const noexcept {
        if (empty()) return false;
        const bool above = open_lo ? x > lo : x >= lo;
        const bool below = open_hi ? x < hi : x <= hi;
        return above && below;
    }
    double length() const noexcept { return empty() ? 0.0 : hi - lo; }

    static Interval open(double lo, double hi) { return {lo, hi, true, true}; }
    static Interval closed(double lo, double hi) { return {lo, hi, false, false}; }
    static Interval none() { return {1.0, 0.0, true, true}; }
};

Interval intersect(const Interval& a, const Interval& b) noexcept;

using IntervalSet = std::vector<Interval>;

bool contains(const IntervalSet& set, double x) noexcept;
bool intersects(const Interval& a, const IntervalSet& set) noexcept;
double total_length(const IntervalSet& set) noexcept;

// ---- Cutoffs -------------------------------------------------------------

// m(lambda, c): a match type plays b iff S < m. Requires c in (-1, u).
double cutoff_match(Belief lambda, double c, const ModelParams& params);
// mm(lambda, c): a mismatch type plays b iff S > mm. Requires c in (-v, 1).
double cutoff_mismatch(Belief lambda, double c, const ModelParams& params);

struct CutoffDerivatives {
    double dm_dc = 0.0;
    double dmm_dc = 0.0;
};

CutoffDerivatives cutoff_derivatives(Belief lambda, double c, const ModelParams& params);

// Belief at which the cutoff equals s (0 maps to 0, 1 maps to +inf).
double invert_match(double s, double c, const ModelParams& params);
double invert_mismatch(double s, double c, const ModelParams& params);

// Shocks for which both cutoffs are defined: (-1, u) intersected with (-v, 1).
Interval admissible_shocks(const ModelParams& params);
void check_shock(double c, const ModelParams& params);

// ---- Regions -------------------------------------------------------------

// Beliefs at which each type is active (its cutoff lies inside the support).
Interval match_active_region(double c, const ModelParams& params, const Support& support);
Interval mismatch_active_region(double c, const ModelParams& params, const Support& support);

// E_c: both types active.
Interval confounding_region(double c, const ModelParams& params, const Support& support);
// H_c: neither type active. Up to three pieces; the middle one appears only
// when the two active regions do not overlap.
IntervalSet herding_region(double c, const ModelParams& params, const Support& support);
// NH_c, the union of the two active regions.
IntervalSet non_herding_region(double c, const ModelParams& params, const Support& support);

struct RegionSet {
    double c = 0.0;
    Interval confounding;
    IntervalSet herding;
    IntervalSet non_herding;
};

RegionSet region_set(double c, const ModelParams& params, const Support& support);

enum class RegionKind { confounding, herding, single_active };
const char* to_string(RegionKind k) noexcept;
RegionKind classify_belief(double lambda, const RegionSet& regions);

// ---- Shock set and belief bounds ---------------------------------------------

struct ShockSet {
    IntervalSet pieces;   // up to two open intervals, one on each side of 0
    std::string warning;  // non-empty when the guard empties the set

    bool empty() const noexcept { return pieces.empty(); }
    double inf() const;
    double sup() const;
    double length() const noexcept { return total_length(pieces); }
    bool contains(double c) const noexcept { return conflearn::contains(pieces, c); }
};

inline constexpr double kShockBoundaryTol = 1e-10;

// C_eps0 = {c : E_c nonempty} within the eps0-shrunk admissible range, minus 0.
// Throws PreconditionError when E_0 is empty.
ShockSet shock_set(const ModelParams& params, const Support& support);

struct LambdaBounds {
    double lo = 0.0;  // below: both cutoffs < 1/2 for every shock in the set
    double hi = 0.0;  // above: both cutoffs > 1/2
};

LambdaBounds lambda_bounds(const ModelParams& params, const ShockSet& shocks);

// E_0 and H_c are disjoint.
bool is_small_shock(double c, const ModelParams& params, const Support& support);

// First shock (moving away from 0 in the given direction, +1 or -1) that is
// not small, located by bisection within the eps0-guarded admissible range.
std::optional<double> small_shock_boundary(const ModelParams& params, const Support& support,
                                           int direction);

}  // namespace conflearn
