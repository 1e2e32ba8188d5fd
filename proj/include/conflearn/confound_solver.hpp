#pragma once

#include "conflearn/payoff_geometry.hpp"
#include "conflearn/signal_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conflearn {

// G_f(lambda, c) = Pr(b | B, lambda, c) - Pr(b | A, lambda, c)
//               = p int_lo^m g(1 - 2s) ds + (1 - p) int_mm^hi g(1 - 2s) ds,
// g(s) = f(s)/s.
struct GEvaluation {
    double lambda = 0.0;
    double c = 0.0;
    double value = 0.0;
    // |integral form - CDF-difference form|, an estimate of quadrature error.
    double error_bound = 0.0;
};

// Requires both cutoffs strictly inside the support; otherwise throws
// RegionError naming the cutoff that escaped.
GEvaluation g_eval(const SignalModel& signal, double lambda, double c, const ModelParams& params);

// Integral form with both cutoffs clamped to the closed support. Agrees with
// g_eval on E_c and extends it continuously to the closure.
double g_value_clamped(const SignalModel& signal, double lambda, double c,
                       const ModelParams& params);

// ---- No-shock roots ---------------------------------------------------------

struct RootScanOptions {
    std::size_t grid_points = 10000;  // log-spaced in lambda
    double plateau_eps = 1e-10;       // |G| below this counts as zero on the grid
    double xtol_rel = 1e-12;
    unsigned threads = 1;
};

struct NoShockRoot {
    double lambda = 0.0;
    double residual = 0.0;  // G(lambda, 0)
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    bool tangency = false;  // |G| small with no sign change
};

struct Plateau {
    double lo = 0.0;  // first and last grid point with |G| < plateau_eps
    double hi = 0.0;
    std::vector<double> grid;  // the grid points themselves
};

struct NoShockRoots {
    Interval e0;
    double scan_lo = 0.0;  // scanned range, after truncation of an unbounded E_0
    double scan_hi = 0.0;
    bool truncated = false;
    std::size_t grid_points = 0;
    double plateau_eps = 0.0;
    std::vector<NoShockRoot> roots;
    std::vector<Plateau> plateaus;

    // Isolated roots excluding tangencies, then plateau grid points.
    std::vector<double> candidates(bool include_tangencies = false,
                                   bool include_plateaus = true) const;
};

// Throws PreconditionError if E_0 is empty.
NoShockRoots find_roots_no_shock(const SignalModel& signal, const ModelParams& params,
                                 const RootScanOptions& options = {});

// ---- Joint system -----------------------------------------------------------

struct JointSolution {
    double lambda = 0.0;
    double g0 = 0.0;  // G(lambda, 0)
    double gc = 0.0;  // G(lambda, c)
};

struct JointResult {
    double c = 0.0;
    std::vector<JointSolution> solutions;
    // min over candidates in E_0 and E_c of |G(lambda, c)|; empty if none is.
    std::optional<double> min_abs_g;
    bool region_empty = false;  // E_0 and E_c do not intersect
};

JointResult joint_solve(const SignalModel& signal, const ModelParams& params,
                        const std::vector<double>& candidates, double c, double eps);
JointResult joint_solve(const SignalModel& signal, const ModelParams& params,
                        const NoShockRoots& roots, double c, double eps);

// ---- Stationary sweep -------------------------------------------------------

struct SweepOptions {
    std::size_t grid_size = 2000;
    double eps = 1e-6;
    double c_min = 0.01;  // dead zone |c| < c_min is not swept
    bool include_plateaus = true;
    bool include_tangencies = false;
    unsigned threads = 1;
    RootScanOptions scan;
};

// A root lambda at which c -> G(lambda, c) changes sign between two adjacent
// grid shocks. Such a point is a genuine solution of the joint system, but
// isolated: it carries no measure.
struct IsolatedCrossing {
    double lambda = 0.0;
    double c = 0.0;
    double residual = 0.0;
};

struct StationaryReport {
    SignalSpec signal;
    ModelParams params;
    NoShockRoots no_shock;
    ShockSet shocks;
    double c_min = 0.0;
    double eps = 0.0;
    std::size_t grid_size = 0;
    double swept_length = 0.0;  // |C_eps0| minus the dead zone
    double spacing = 0.0;
    std::vector<JointResult> grid;  // grid order
    std::size_t passing = 0;
    double passing_fraction = 0.0;
    double measure = 0.0;
    std::vector<IsolatedCrossing> crossings;
    bool include_plateaus = true;
    bool include_tangencies = false;

    std::optional<double> min_abs_g() const;
};

// Cell-centered uniform grid over the swept set. Throws PreconditionError if
// C_eps0 is empty.
StationaryReport stationary_sweep(const SignalModel& signal, const ModelParams& params,
                                  const SweepOptions& options = {});

// ---- Belief-bound cross-check ---------------------------------------------------

// Flagged joint solutions at one shock on one side of the belief bounds.
struct BoundFlag {
    double c = 0.0;
    bool below = false;  // lambda < lower bound (else above the upper bound)
    std::size_t count = 0;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    double cutoff_lo = 0.0;  // range of m and mm over those beliefs and shocks in [0, c]
    double cutoff_hi = 0.0;
    bool locally_zero_ok = false;
};

struct BoundAnnotation {
    LambdaBounds bounds;
    std::optional<ClosedInterval> zero_interval;
    // Allowed excursion of the cutoffs beyond the zero interval on each side:
    // the larger of a few scan cells and the distance over which the moment
    // integrand accumulates eps / min(p, 1 - p), so that eps-confounded
    // beliefs are not reported as inconsistent.
    double slack_lo = 0.0;
    double slack_hi = 0.0;
    std::vector<BoundFlag> flags;
    std::vector<std::string> warnings;  // numerical inconsistencies
};

struct BoundCheckOptions {
    std::size_t resolution = 10000;  // grid for the locally-zero scan
    std::size_t slack_cells = 5;
};

BoundAnnotation lambda_bound_check(const SignalModel& signal, const ModelParams& params,
                                   const StationaryReport& report,
                                   const BoundCheckOptions& options = {});

}  // namespace conflearn
