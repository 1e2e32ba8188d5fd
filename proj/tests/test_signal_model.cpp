#include "conflearn/error.hpp"
#include "conflearn/numeric.hpp"
#include "conflearn/signal_model.hpp"

#include "doctest.h"

#include <cmath>

using namespace conflearn;
using doctest::Approx;

namespace {

// f(s) = 1.5 s + 3 s^2 - 3 s^3 on (0, 1): normalized and moment-free.
SignalModel cubic() { return SignalModel::polynomial({0.0, 1.5, 3.0, -3.0}, Support(0.0, 1.0)); }

std::vector<SignalModel> valid_models() {
    return {SignalModel::linear(), SignalModel::truncated_linear(0.25), cubic(),
            balanced_tent(Support(0.25, 0.75)), balanced_tent(Support(0.1, 1.0)),
            balanced_piecewise_linear({0.38, 0.39, 0.40, 0.50, 0.515, 0.53}, {0, 1, 0, 0, 1, 0},
                                      Support(0.38, 0.53))};
}

}  // namespace

TEST_CASE("support classification") {
    CHECK(Support(0.0, 1.0).classification() == SupportClass::unbounded);
    CHECK(Support(0.2, 1.0).classification() == SupportClass::partially_bounded);
    CHECK(Support(0.0, 0.8).classification() == SupportClass::partially_bounded);
    CHECK(Support(0.25, 0.75).classification() == SupportClass::strongly_bounded);
    CHECK_THROWS_AS(Support(0.5, 0.5), ParameterError);
    CHECK_THROWS_AS(Support(-0.1, 0.5), ParameterError);
    CHECK_THROWS_AS(Support(0.1, 1.2), ParameterError);
}

TEST_CASE("linear signal closed forms") {
    const auto f = SignalModel::linear();
    for (double x : {0.0, 0.1, 1.0 / 3.0, 0.5, 0.9, 1.0}) {
        CHECK(f.cdf(State::A, x) == Approx(x * x).epsilon(1e-13));
        CHECK(f.cdf(State::B, x) == Approx(2 * x - x * x).epsilon(1e-13));
        CHECK(f.moment_cdf(x) == Approx(2 * x - 2 * x * x).epsilon(1e-13));
    }
    CHECK(f.density_b(0.25) == Approx(1.5));
    CHECK(f.over_s(0.0) == Approx(2.0));
    CHECK_THROWS_AS(f.cdf(State::A, 1.5), DomainError);
    CHECK_THROWS_AS(f.density_a(-0.1), DomainError);
}

TEST_CASE("truncated linear closed forms") {
    const auto f = SignalModel::truncated_linear(0.25);
    CHECK(f.density_a(0.5) == Approx(2.0));
    for (double x : {0.25, 0.4, 0.6, 0.75}) {
        CHECK(f.cdf(State::A, x) == Approx(2 * (x * x - 0.0625)).epsilon(1e-13));
    }
}

TEST_CASE("valid models satisfy the signal-space constraints") {
    for (const auto& f : valid_models()) {
        CAPTURE(f.spec().family);
        const auto rep = validate(f, 1e-8);
        CHECK(rep.pass);
        CHECK(std::abs(rep.density_b_mass - 1.0) < 1e-10);
        CHECK(std::abs(f.cdf(State::A, f.support().hi()) - 1.0) < 1e-10);
        CHECK(std::abs(f.cdf(State::B, f.support().hi()) - 1.0) < 1e-10);
    }
}

TEST_CASE("cdfs are monotone and match the moment identity") {
    for (const auto& f : valid_models()) {
        CAPTURE(f.spec().family);
        const auto xs = numeric::linspace(f.support().lo(), f.support().hi(), 1000);
        double pa = -1.0, pb = -1.0;
        for (double x : xs) {
            const double a = f.cdf(State::A, x), b = f.cdf(State::B, x);
            REQUIRE(a >= pa - 1e-15);
            REQUIRE(b >= pb - 1e-15);
            pa = a;
            pb = b;
            REQUIRE(std::abs((b - a) - f.moment_cdf(x)) < 1e-11);
        }
    }
}

TEST_CASE("state B density ratio is exact on strongly bounded supports") {
    const auto f = SignalModel::truncated_linear(0.25);
    for (double x : numeric::linspace(0.25, 0.75, 101)) {
        CHECK(f.density_b(x) == f.density_a(x) * (1.0 - x) / x);
    }
}

TEST_CASE("validation names violated constraints") {
    const auto uniform = SignalModel::polynomial({1.0}, Support(0.0, 1.0));
    const auto rep = validate(uniform, 1e-8);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.boundedness.pass);
    CHECK_FALSE(rep.moment.pass);
    CHECK(rep.normalization.pass);
    const auto names = rep.failures();
    CHECK(std::find(names.begin(), names.end(), "boundedness") != names.end());

    const auto neg = validate([](double s) { return 3.0 - 5.0 * s; }, Support(0.25, 0.75), 1e-8);
    CHECK_FALSE(neg.nonnegativity.pass);
}

TEST_CASE("sampling follows the cdf") {
    const auto f = SignalModel::linear();
    RandomStream rng(99);
    const int n = 100000;
    int below = 0;
    for (int i = 0; i < n; ++i) {
        const double s = f.sample(State::A, rng);
        REQUIRE(s > 0.0);
        REQUIRE(s < 1.0);
        if (s < 0.5) ++below;
    }
    // F^A(1/2) = 1/4
    CHECK(std::abs(below / double(n) - 0.25) < 4.0 * std::sqrt(0.25 * 0.75 / n));
    for (double u : {0.01, 0.3, 0.77}) {
        CHECK(f.cdf(State::B, f.sample_at(State::B, u)) == Approx(u).epsilon(1e-10));
    }
}

TEST_CASE("locally zero detection") {
    const auto f = balanced_piecewise_linear({0.38, 0.39, 0.40, 0.50, 0.515, 0.53},
                                             {0, 1, 0, 0, 1, 0}, Support(0.38, 0.53));
    const auto z = is_locally_zero(f, 10000);
    REQUIRE(z);
    CHECK(z->lo == Approx(0.40).epsilon(1e-3));
    CHECK(z->hi == Approx(0.50).epsilon(1e-3));
    CHECK_FALSE(is_locally_zero(SignalModel::linear(), 10000));
}

TEST_CASE("signal description round trip") {
    for (const auto& f : valid_models()) {
        const auto g = SignalModel::from_spec(f.spec());
        for (double x : numeric::linspace(f.support().lo(), f.support().hi(), 37)) {
            CHECK(g.density_a(x) == f.density_a(x));
        }
    }
    CHECK_THROWS_AS(SignalModel::from_spec({"nope", {}, Support(0.0, 1.0)}), ParameterError);
}
