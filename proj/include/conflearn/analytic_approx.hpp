#pragma once

#include "conflearn/chebyshev.hpp"
#include "conflearn/lifting_function.hpp"
#include "conflearn/signal_model.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace conflearn {

// r(s) = gamma s^power with int r(s)(1 - 2s) ds = 1 over the support.
struct RPolynomial {
    unsigned power = 0;
    double gamma = 0.0;

    double operator()(double s) const noexcept { return gamma * std::pow(s, power); }
};

RPolynomial make_r_polynomial(const Support& support);

// Phi(alpha) = int h_alpha(x)(1 - 2x) dx over the support; strictly
// decreasing in alpha.
double lifting_moment(double a, double b, double alpha, const Support& support);

inline constexpr double kAlphaTolerance = 1e-10;

// Root of Phi. Requires a < 0 < 1 < b and lo < 1/2 < hi.
double solve_alpha(double a, double b, const Support& support);

struct ProjectionTrace {
    double delta = 0.0;    // min(min g_hat, 0) on the grid
    double delta_h = 0.0;  // min of h on [0, 1]
    double kappa = 0.0;    // -delta / delta_h, the weight of h in g_tilde
    double normalizer = 0.0;  // int g_tilde(s) s ds
    double g_tilde_moment = 0.0;
    double g_tilde_min = 0.0;
};

// Lift g_hat by a multiple of h until it is nonnegative, then return the
// density g_tilde(s) s / int g_tilde(s) s ds. Requires g_hat moment-free.
SignalModel project_to_signal(const ChebyshevSeries& g_hat, const Support& support,
                              const LiftingFunction& lifting, ProjectionTrace* trace = nullptr);

struct ApproxPipelineTrace {
    SignalSpec target;
    std::size_t degree = 0;
    std::vector<double> g_bar;  // Chebyshev coefficients of the raw approximant of f(s)/s
    double epsilon = 0.0;       // int g_bar (1 - 2s)
    RPolynomial r;
    std::vector<double> g_hat;
    double g_hat_moment = 0.0;  // int g_hat (1 - 2s), should vanish
    LiftingFunction lifting;
    double alpha_residual = 0.0;  // Phi(alpha)
    ProjectionTrace projection;
    double final_min = 0.0;  // min of the output density on the error grid
    double sup_error = 0.0;  // max |f_n - f| on the error grid
    std::size_t error_grid = 0;
    ValidationReport validation;
    SignalSpec result;
};

struct ApproxResult {
    SignalModel signal;
    ApproxPipelineTrace trace;
};

struct ApproxOptions {
    double a = -1.0;
    double b = 2.0;
    std::size_t error_grid = 10000;
    double validate_tol = 1e-8;
};

// Throws ParameterError for degree < 2 and EvaluationError when f(s)/s has
// no finite value at an end of the support.
ApproxResult approximate_analytic(const SignalModel& target, std::size_t degree,
                                  const ApproxOptions& options = {});

std::vector<ApproxResult> approximate_schedule(const SignalModel& target,
                                               const std::vector<std::size_t>& degrees,
                                               const ApproxOptions& options = {});

}  // namespace conflearn
