#include "conflearn/analytic_approx.hpp"

#include "conflearn/error.hpp"
#include "conflearn/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conflearn {

namespace {

double moment_integral(const std::function<double(double)>& g, const Support& s) {
    return numeric::integrate([&](double x) { return g(x) * (1.0 - 2.0 * x); }, s.lo(), s.hi(),
                              1e-14)
        .value;
}

}  // namespace

RPolynomial make_r_polynomial(const Support& support) {
    const double lo = support.lo(), hi = support.hi();
    for (unsigned k = 0; k <= 2; ++k) {
        const double k1 = k + 1.0, k2 = k + 2.0;
        const double base = (std::pow(hi, k1) - std::pow(lo, k1)) / k1 -
                            2.0 * (std::pow(hi, k2) - std::pow(lo, k2)) / k2;
        if (std::abs(base) > 1e-14) return {k, 1.0 / base};
    }
    throw ParameterError("make_r_polynomial: degenerate support");
}

double lifting_moment(double a, double b, double alpha, const Support& support) {
    // Shift the exponent by its maximum on the support when it would overflow;
    // this rescales Phi by a positive factor and keeps its sign.
    double shift = 0.0;
    if (std::abs(alpha) * 0.5 > 600.0) {
        shift = alpha > 0.0 ? support.hi() - 0.5 : support.lo() - 0.5;
    }
    auto f = [&](double x) {
        return 0.5 * (x - a) * (b - x) * std::exp(alpha * (x - 0.5 - shift)) * (1.0 - 2.0 * x);
    };
    return numeric::integrate(f, support.lo(), support.hi(), 1e-14).value;
}

double solve_alpha(double a, double b, const Support& support) {
    if (!(a < 0.0) || !(b > 1.0)) throw ParameterError("solve_alpha needs a < 0 and b > 1");
    if (!(support.lo() < 0.5 && support.hi() > 0.5)) {
        throw ParameterError("solve_alpha needs 1/2 inside the support");
    }
    auto phi = [&](double alpha) { return lifting_moment(a, b, alpha, support); };
    const double phi0 = phi(0.0);
    if (std::abs(phi0) <= kAlphaTolerance) return 0.0;

    // Phi is decreasing, so the root lies on the side where Phi changes sign.
    const double dir = phi0 > 0.0 ? 1.0 : -1.0;
    double near = 0.0, far = 0.0;
    bool found = false;
    for (int k = 0; k <= 60; ++k) {
        far = dir * std::ldexp(1.0, k);
        const double v = phi(far);
        if ((v > 0.0) != (phi0 > 0.0) || v == 0.0) {
            found = true;
            break;
        }
        near = far;
    }
    if (!found) {
        std::ostringstream os;
        os << "solve_alpha: no sign change of Phi up to |alpha| = 2^60 (Phi(0) = " << phi0 << ")";
        throw NumericalError(os.str());
    }
    double lo = std::min(near, far), hi = std::max(near, far);
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 400; ++it) {
        mid = 0.5 * (lo + hi);
        const double v = phi(mid);
        if (std::abs(v) <= kAlphaTolerance && hi - lo < 1e-12) break;
        if (mid <= lo || mid >= hi) break;
        if (v > 0.0) lo = mid; else hi = mid;
    }
    if (!(std::abs(phi(mid)) <= kAlphaTolerance)) {
        std::ostringstream os;
        os << "solve_alpha: |Phi| = " << std::abs(phi(mid)) << " at the final bracket";
        throw NumericalError(os.str());
    }
    return mid;
}

SignalModel project_to_signal(const ChebyshevSeries& g_hat, const Support& support,
                              const LiftingFunction& lifting, ProjectionTrace* trace) {
    ProjectionTrace tr;
    const auto grid = numeric::linspace(support.lo(), support.hi(), 10000);
    double min_g = 0.0;
    for (double x : grid) min_g = std::min(min_g, g_hat(x));
    tr.delta = min_g;
    tr.delta_h = lifting.min_on_unit_interval();
    tr.kappa = -tr.delta / tr.delta_h;

    auto g_tilde = [&](double x) { return g_hat(x) + tr.kappa * lifting(x); };
    tr.normalizer = numeric::integrate([&](double x) { return g_tilde(x) * x; }, support.lo(),
                                       support.hi(), 1e-14)
                        .value;
    if (!(tr.normalizer > 0.0)) {
        std::ostringstream os;
        os << "project_to_signal: normalization integral " << tr.normalizer << " is not positive";
        throw NumericalError(os.str());
    }
    tr.g_tilde_moment = moment_integral(g_tilde, support);
    tr.g_tilde_min = g_tilde(grid.front());
    for (double x : grid) tr.g_tilde_min = std::min(tr.g_tilde_min, g_tilde(x));

    SignalSpec spec;
    spec.family = "lifted_chebyshev";
    spec.support = support;
    spec.coefficients = {1.0 / tr.normalizer, tr.kappa, lifting.a, lifting.b, lifting.alpha};
    spec.coefficients.insert(spec.coefficients.end(), g_hat.coefficients().begin(),
                             g_hat.coefficients().end());
    if (trace) *trace = tr;
    return SignalModel::from_spec(spec);
}

ApproxResult approximate_analytic(const SignalModel& target, std::size_t degree,
                                  const ApproxOptions& options) {
    if (degree < 2) throw ParameterError("approximate_analytic needs degree >= 2");
    const Support& sup = target.support();
    for (double end : {sup.lo(), sup.hi()}) {
        const double g = target.over_s(end);
        if (!std::isfinite(g)) {
            std::ostringstream os;
            os << "f(s)/s has no continuous extension to s = " << end;
            throw EvaluationError(os.str(), end);
        }
    }

    ApproxPipelineTrace tr;
    tr.target = target.spec();
    tr.degree = degree;

    const auto g_bar = ChebyshevSeries::interpolate([&](double s) { return target.over_s(s); },
                                                    sup.lo(), sup.hi(), degree);
    tr.g_bar = g_bar.coefficients();
    tr.epsilon = moment_integral([&](double s) { return g_bar(s); }, sup);

    tr.r = make_r_polynomial(sup);
    const auto r_series =
        ChebyshevSeries::interpolate(tr.r, sup.lo(), sup.hi(), std::max(1u, tr.r.power));
    const ChebyshevSeries g_hat = g_bar - tr.epsilon * r_series;
    tr.g_hat = g_hat.coefficients();
    tr.g_hat_moment = moment_integral([&](double s) { return g_hat(s); }, sup);

    tr.lifting = LiftingFunction{options.a, options.b, solve_alpha(options.a, options.b, sup)};
    tr.alpha_residual = lifting_moment(options.a, options.b, tr.lifting.alpha, sup);

    auto model = project_to_signal(g_hat, sup, tr.lifting, &tr.projection);

    const auto grid = numeric::linspace(sup.lo(), sup.hi(), options.error_grid);
    tr.error_grid = grid.size();
    tr.final_min = model.density_a(grid.front());
    for (double x : grid) {
        const double fn = model.density_a(x);
        tr.final_min = std::min(tr.final_min, fn);
        tr.sup_error = std::max(tr.sup_error, std::abs(fn - target.density_a(x)));
    }
    tr.validation = validate(model, options.validate_tol);
    tr.result = model.spec();
    return {std::move(model), std::move(tr)};
}

std::vector<ApproxResult> approximate_schedule(const SignalModel& target,
                                               const std::vector<std::size_t>& degrees,
                                               const ApproxOptions& options) {
    std::vector<ApproxResult> out;
    out.reserve(degrees.size());
    for (auto d : degrees) out.push_back(approximate_analytic(target, d, options));
    return out;
}

}  // namespace conflearn
