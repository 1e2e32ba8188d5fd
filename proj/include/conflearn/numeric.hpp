#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace conflearn::numeric {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

// Adaptive Gauss-Kronrod (7/15) on [a, b]. `tol` is relative to the L1
// norm of the integrand; for the O(1) densities used here that is the
// absolute tolerance as well.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double tol = 1e-13,
                           unsigned max_depth = 18);

// Root of a continuous f with f(lo), f(hi) of opposite sign.
// Stops when hi - lo <= xtol or the midpoint is no longer representable.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter = 400);

// Boundary of a monotone predicate on [lo, hi], given pred(lo) != pred(hi).
// Returns the final bracket; pred(bracket.lo) keeps the value pred(lo) had.
struct PredicateBracket {
    double lo = 0.0;
    double hi = 0.0;
};
PredicateBracket bisect_predicate(const std::function<bool(double)>& pred,
                                  double lo, double hi, double xtol,
                                  int max_iter = 400);

std::vector<double> linspace(double a, double b, std::size_t n);
std::vector<double> logspace(double a, double b, std::size_t n);

inline bool is_finite(double x) { return std::isfinite(x); }

}  // namespace conflearn::numeric
