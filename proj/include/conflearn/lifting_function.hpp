#pragma once

#include <cmath>

namespace conflearn {

// h(x) = 0.5 (x - a)(b - x) exp(alpha (x - 1/2)), with a < 0 and b > 1 so
// that h > 0 on [0, 1]. alpha is chosen to make h(x)(1 - 2x) integrate to
// zero over a signal support (see solve_alpha).
struct LiftingFunction {
    double a = -1.0;
    double b = 2.0;
    double alpha = 0.0;

    double operator()(double x) const noexcept {
        return 0.5 * (x - a) * (b - x) * std::exp(alpha * (x - 0.5));
    }

    // log h is concave on (a, b), so the minimum over [0, 1] sits at an end.
    double min_on_unit_interval() const noexcept {
        const double h0 = (*this)(0.0);
        const double h1 = (*this)(1.0);
        return h0 < h1 ? h0 : h1;
    }
};

}  // namespace conflearn
