#pragma once

#include "conflearn/random.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace conflearn {

enum class State { A, B };

const char* to_string(State s) noexcept;

enum class SupportClass { strongly_bounded, partially_bounded, unbounded };

const char* to_string(SupportClass c) noexcept;

// Open support (lo, hi) of a direct signal, 0 <= lo < hi <= 1.
class Support {
public:
    Support(double lo, double hi);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double width() const noexcept { return hi_ - lo_; }
    SupportClass classification() const noexcept;
    bool contains_closed(double s) const noexcept { return s >= lo_ && s <= hi_; }

    friend bool operator==(const Support&, const Support&) = default;

private:
    double lo_;
    double hi_;
};

// Serializable description { family, coefficients[], support }.
//
// Families and their coefficient layouts:
//   "linear"             f(s) = 2s on (0, 1); no coefficients
//   "truncated_linear"   f(s) = 2s / (1 - 2 lo) on (lo, 1 - lo); no coefficients
//   "polynomial"         f(s) = sum_k c_k s^k; coefficients c_0..c_n
//   "piecewise_linear"   knots [x0, y0, x1, y1, ...], x ascending, linear in
//                        between, zero outside [x0, xn]
//   "lifted_chebyshev"   f(s) = scale * s * (sum_k c_k T_k(t) + kappa * h(s)),
//                        h the lifting function; coefficients
//                        [scale, kappa, a, b, alpha, c_0..c_n]
struct SignalSpec {
    std::string family;
    std::vector<double> coefficients;
    Support support{0.0, 1.0};
};

// Density f = f^A of a direct signal, plus g(s) = f(s)/s which every
// integrand involving 1/s is written in terms of.
class DensityFamily {
public:
    virtual ~DensityFamily() = default;
    virtual double density(double s) const = 0;
    virtual double over_s(double s) const = 0;
    // Points where the density may have a kink; quadrature never straddles them.
    virtual std::vector<double> breakpoints() const { return {}; }
};

// Immutable direct-signal model: state-A density f, state-B density
// f(s)(1 - s)/s, and their CDFs. Cumulative integrals are tabulated on panels
// at construction, so cdf() costs one Gauss-Kronrod panel.
class SignalModel {
public:
    static SignalModel from_spec(const SignalSpec& spec);
    static SignalModel linear();
    static SignalModel truncated_linear(double lo);
    static SignalModel polynomial(std::vector<double> coeffs, Support support);
    static SignalModel piecewise_linear(std::vector<double> xs, std::vector<double> ys,
                                        Support support);

    // Black-box density; g is computed as f(s)/s.
    static SignalModel custom(std::function<double(double)> density, Support support,
                              std::string tag = "custom");

    const Support& support() const noexcept { return spec_.support; }
    const SignalSpec& spec() const noexcept { return spec_; }

    double density_a(double s) const;
    double density_b(double s) const;
    double density(State state, double s) const;
    // f(s)/s, extended continuously to s = 0 where the family allows.
    double over_s(double s) const;

    // F^state(x) for x in the closed support.
    double cdf(State state, double x) const;
    // int_lo^x f(s)(1 - 2s)/s ds, evaluated from g directly.
    double moment_cdf(double x) const;

    double sample(State state, RandomStream& rng) const;
    // Inverse CDF for a given uniform; sample() is sample_at(rng.uniform()).
    double sample_at(State state, double u) const;

    // Essential sup of max(f, f(1 - s)/s) estimated on a grid.
    double sup_bound() const noexcept { return sup_bound_; }

    const DensityFamily& family() const noexcept { return *family_; }

    SignalModel(std::shared_ptr<const DensityFamily> family, SignalSpec spec);

private:
    enum class Integrand { a, b, moment };
    double integrand(Integrand which, double s) const;
    double partial(Integrand which, std::size_t panel, double x) const;
    double cumulative(Integrand which, double x) const;
    const std::vector<double>& table(Integrand which) const;
    std::size_t panel_of(double x) const;

    std::shared_ptr<const DensityFamily> family_;
    SignalSpec spec_;
    std::vector<double> nodes_;
    std::vector<double> cum_a_;
    std::vector<double> cum_b_;
    std::vector<double> cum_moment_;
    double sup_bound_ = 0.0;
};

// Piecewise-linear density with the given knot shape (ys) rescaled on the
// two sides of 1/2 so that both integral constraints hold exactly. Every
// knot with ys == 0 stays zero, which is how locally-zero test signals are
// built.
SignalModel balanced_piecewise_linear(const std::vector<double>& xs,
                                      const std::vector<double>& ys, Support support);

// Tent density: zero at both ends of a strongly or partially bounded support,
// linear up to a peak and back down. The peak sits where the moment
// constraint holds (found by bisection), then the tent is normalized.
SignalModel balanced_tent(Support support);

// ---- Validation ----------------------------------------------------------

struct ConstraintCheck {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ValidationReport {
    ConstraintCheck normalization;   // |int f - 1|
    ConstraintCheck moment;          // |int f (1 - 2s)/s|
    ConstraintCheck nonnegativity;   // min f on the grid
    ConstraintCheck boundedness;     // sup max(f, f(1 - s)/s) on the grid
    double density_b_mass = 0.0;     // int f(1 - s)/s, should be 1
    std::size_t grid_points = 0;
    bool pass = false;

    std::vector<std::string> failures() const;
};

struct ValidationOptions {
    std::size_t grid_points = 10000;
    // A sup above this is treated as unbounded.
    double boundedness_cap = 1e8;
};

ValidationReport validate(const std::function<double(double)>& density,
                          const Support& support, double tol,
                          const ValidationOptions& options = {});
ValidationReport validate(const SignalModel& model, double tol,
                          const ValidationOptions& options = {});

// ---- Free functions ----------------------------------------------------------

double density_b(const SignalModel& model, double s);
double cdf(const SignalModel& model, State state, double x);
double sample(const SignalModel& model, State state, RandomStream& rng);

struct ClosedInterval {
    double lo = 0.0;
    double hi = 0.0;
};

inline constexpr double kLocallyZeroTolerance = 1e-12;

// Longest run of interior grid points with f <= 1e-12, as [first, last].
// Runs of a single point are ignored.
std::optional<ClosedInterval> is_locally_zero(const SignalModel& model,
                                              std::size_t grid_resolution);

}  // namespace conflearn
