#include "conflearn/analytic_approx.hpp"
#include "conflearn/confound_solver.hpp"
#include "conflearn/error.hpp"
#include "conflearn/numeric.hpp"

#include "doctest.h"

#include <cmath>

using namespace conflearn;
using doctest::Approx;

TEST_CASE("correction polynomial") {
    const auto r01 = make_r_polynomial(Support(0.0, 1.0));
    CHECK(r01.power == 1);
    CHECK(r01.gamma == Approx(-6.0).epsilon(1e-12));
    const auto r = make_r_polynomial(Support(0.25, 0.75));
    CHECK(r.power == 1);
    CHECK(r.gamma == Approx(-48.0).epsilon(1e-12));
    const auto moment = numeric::integrate([&](double s) { return r(s) * (1 - 2 * s); }, 0.25, 0.75).value;
    CHECK(moment == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lifting exponent") {
    // (x + 1)(2 - x) is symmetric about 1/2, so symmetric supports need no tilt.
    CHECK(std::abs(solve_alpha(-1.0, 2.0, Support(0.25, 0.75))) <= kAlphaTolerance);
    CHECK(std::abs(solve_alpha(-1.0, 2.0, Support(0.0, 1.0))) <= kAlphaTolerance);
    for (const auto& [a, b, lo, hi] : {std::tuple{-0.5, 3.0, 0.1, 0.9}, std::tuple{-2.0, 1.5, 0.0, 0.7},
                                       std::tuple{-0.1, 1.1, 0.3, 1.0}}) {
        const Support sup(lo, hi);
        const double alpha = solve_alpha(a, b, sup);
        CHECK(std::abs(lifting_moment(a, b, alpha, sup)) <= 1e-10);
        CHECK(lifting_moment(a, b, alpha - 0.1, sup) > lifting_moment(a, b, alpha + 0.1, sup));
        const LiftingFunction h{a, b, alpha};
        for (double x : numeric::linspace(0.0, 1.0, 1001)) REQUIRE(h(x) > 0.0);
    }
    CHECK_THROWS(solve_alpha(0.5, 2.0, Support(0.25, 0.75)));
    CHECK_THROWS(solve_alpha(-1.0, 2.0, Support(0.6, 0.9)));
}

TEST_CASE("pipeline on the tent target") {
    const auto tent = balanced_tent(Support(0.25, 0.75));
    const auto results = approximate_schedule(tent, {4, 8, 16, 32});
    REQUIRE(results.size() == 4);
    double prev = kInf;
    for (const auto& r : results) {
        const auto& t = r.trace;
        CAPTURE(t.degree);
        CHECK(t.validation.pass);
        CHECK(validate(r.signal, 1e-8).pass);
        CHECK(std::abs(t.g_hat_moment) <= 1e-9);
        CHECK(std::abs(t.projection.g_tilde_moment) <= 1e-9);
        CHECK(std::abs(t.alpha_residual) <= 1e-10);
        CHECK(t.final_min >= -1e-12);
        CHECK(t.sup_error <= 1.1 * prev);
        prev = t.sup_error;
        for (double s : numeric::linspace(0.25, 0.75, 10000)) REQUIRE(r.signal.density_a(s) >= -1e-12);
    }
}

TEST_CASE("polynomial targets are reproduced and keep their roots") {
    const auto cubic = SignalModel::polynomial({0.0, 1.5, 3.0, -3.0}, Support(0.0, 1.0));
    const auto params = make_params(0.5, 2.0, 1.0);
    const auto target = find_roots_no_shock(cubic, params);
    const auto results = approximate_schedule(cubic, {4, 8});
    std::vector<double> prev;
    for (const auto& r : results) {
        CHECK(r.trace.sup_error < 1e-9);
        const auto roots = find_roots_no_shock(r.signal, params);
        REQUIRE(roots.roots.size() == target.roots.size());
        std::vector<double> lams;
        for (const auto& x : roots.roots) lams.push_back(x.lambda);
        for (std::size_t i = 0; i < lams.size(); ++i) {
            CHECK(std::abs(lams[i] - target.roots[i].lambda) < 1e-6);
            if (!prev.empty()) CHECK(std::abs(lams[i] - prev[i]) < 1e-6);
        }
        prev = lams;
    }
}

TEST_CASE("invalid inputs") {
    const auto tent = balanced_tent(Support(0.25, 0.75));
    CHECK_THROWS_AS(approximate_analytic(tent, 1), ParameterError);
    const auto uniform = SignalModel::polynomial({1.0}, Support(0.0, 1.0));
    CHECK_THROWS_AS(approximate_analytic(uniform, 8), EvaluationError);
}
