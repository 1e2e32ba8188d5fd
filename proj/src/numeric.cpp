#include "conflearn/numeric.hpp"

#include "conflearn/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <stdexcept>

namespace conflearn::numeric {

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double tol, unsigned max_depth) {
    if (a == b) return {};
    // Integrate over [0, 1] in t = (x - a)/(b - a). The library compares an
    // error estimate taken on the reference interval with a tolerance scaled
    // by the subinterval width, so short intervals would otherwise always
    // recurse to max_depth.
    const double w = b - a;
    auto g = [&](double t) { return f(a + w * t) * w; };
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err = 0.0;
    double l1 = 0.0;
    // One panel first; the adaptive entry point has a large fixed cost.
    const double single = GK::integrate(g, 0.0, 1.0, 0, tol, &err, &l1);
    if (err <= tol * l1) return {single, err};
    const double value = GK::integrate(g, 0.0, 1.0, max_depth, tol, &err);
    return {value, err};
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw NumericalError("bisect: f does not change sign on the bracket");
    }
    for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

PredicateBracket bisect_predicate(const std::function<bool(double)>& pred,
                                  double lo, double hi, double xtol,
                                  int max_iter) {
    const bool plo = pred(lo);
    if (plo == pred(hi)) {
        throw NumericalError("bisect_predicate: predicate equal at both ends");
    }
    // lo may exceed hi; the bracket shrinks either way.
    for (int it = 0; it < max_iter && std::abs(hi - lo) > xtol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (pred(mid) == plo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {lo, hi};
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    out.back() = b;
    return out;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("logspace: endpoints must be positive");
    }
    auto out = linspace(std::log(a), std::log(b), n);
    for (auto& x : out) x = std::exp(x);
    if (n > 0) {
        out.front() = a;
        out.back() = b;
    }
    return out;
}

}  // namespace conflearn::numeric
