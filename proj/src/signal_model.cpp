#include "conflearn/signal_model.hpp"

#include "conflearn/chebyshev.hpp"
#include "conflearn/error.hpp"
#include "conflearn/lifting_function.hpp"
#include "conflearn/numeric.hpp"


#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace conflearn {

const char* to_string(State s) noexcept { return s == State::A ? "A" : "B"; }

const char* to_string(SupportClass c) noexcept {
    switch (c) {
        case SupportClass::strongly_bounded: return "strongly_bounded";
        case SupportClass::partially_bounded: return "partially_bounded";
        case SupportClass::unbounded: return "unbounded";
    }
    return "unknown";
}

Support::Support(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo >= 0.0 && lo < 1.0 && hi > 0.0 && hi <= 1.0 && lo < hi)) {
        std::ostringstream os;
        os << "support must satisfy 0 <= lo < hi <= 1, got (" << lo << ", " << hi << ")";
        throw ParameterError(os.str());
    }
}

SupportClass Support::classification() const noexcept {
    const bool touches_lo = lo_ == 0.0;
    const bool touches_hi = hi_ == 1.0;
    if (touches_lo && touches_hi) return SupportClass::unbounded;
    if (touches_lo || touches_hi) return SupportClass::partially_bounded;
    return SupportClass::strongly_bounded;
}

namespace {

constexpr std::size_t kBasePanels = 256;
constexpr double kPanelTol = 1e-14;
constexpr unsigned kPanelDepth = 10;
constexpr double kSampleTol = 1e-12;

class TruncatedLinearFamily final : public DensityFamily {
public:
    explicit TruncatedLinearFamily(double lo) : k_(2.0 / (1.0 - 2.0 * lo)) {}
    double density(double s) const override { return k_ * s; }
    double over_s(double) const override { return k_; }

private:
    double k_;
};

class PolynomialFamily final : public DensityFamily {
public:
    explicit PolynomialFamily(std::vector<double> c) : c_(std::move(c)) {}

    double density(double s) const override {
        double acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
        return acc;
    }

    double over_s(double s) const override {
        double acc = 0.0;
        for (std::size_t k = c_.size(); k-- > 1;) acc = acc * s + c_[k];
        if (c_.empty() || c_[0] == 0.0) return acc;
        if (s == 0.0) return std::numeric_limits<double>::infinity();
        return acc + c_[0] / s;
    }

private:
    std::vector<double> c_;
};

class PiecewiseLinearFamily final : public DensityFamily {
public:
    PiecewiseLinearFamily(std::vector<double> xs, std::vector<double> ys)
        : xs_(std::move(xs)), ys_(std::move(ys)) {}

    double density(double s) const override {
        if (s < xs_.front() || s > xs_.back()) return 0.0;
        auto it = std::upper_bound(xs_.begin(), xs_.end(), s);
        if (it == xs_.end()) return ys_.back();
        const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
        if (i == 0) return ys_.front();
        const double x0 = xs_[i - 1], x1 = xs_[i];
        const double w = (s - x0) / (x1 - x0);
        return ys_[i - 1] + w * (ys_[i] - ys_[i - 1]);
    }

    double over_s(double s) const override {
        if (s > 0.0) return density(s) / s;
        // s == 0: continuous extension exists only when f(0) == 0.
        if (xs_.front() > 0.0) return 0.0;
        if (ys_.front() != 0.0) return std::numeric_limits<double>::infinity();
        return (ys_[1] - ys_[0]) / (xs_[1] - xs_[0]);
    }

    std::vector<double> breakpoints() const override { return xs_; }

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

class LiftedChebyshevFamily final : public DensityFamily {
public:
    LiftedChebyshevFamily(double scale, double kappa, LiftingFunction h, ChebyshevSeries p)
        : scale_(scale), kappa_(kappa), h_(h), p_(std::move(p)) {}

    double density(double s) const override { return s * over_s(s); }
    double over_s(double s) const override { return scale_ * (p_(s) + kappa_ * h_(s)); }

private:
    double scale_;
    double kappa_;
    LiftingFunction h_;
    ChebyshevSeries p_;
};

class CustomFamily final : public DensityFamily {
public:
    explicit CustomFamily(std::function<double(double)> f) : f_(std::move(f)) {}
    double density(double s) const override { return f_(s); }
    double over_s(double s) const override {
        if (s > 0.0) return f_(s) / s;
        const double tiny = 1e-300;
        return f_(tiny) / tiny;
    }

private:
    std::function<double(double)> f_;
};

void require_finite(double value, double s, const char* what) {
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os << what << " is not finite at s = " << s;
        throw EvaluationError(os.str(), s);
    }
}

// Interior grid used for sup/min estimates, with geometric refinement towards
// any endpoint that touches 0 where (1 - s)/s blows up.
std::vector<double> probe_grid(const Support& support, std::size_t n) {
    std::vector<double> grid;
    grid.reserve(n + 64);
    const double lo = support.lo(), hi = support.hi();
    for (std::size_t i = 1; i < n; ++i) {
        grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n));
    }
    for (int k = 1; k <= 60; ++k) {
        const double step = (hi - lo) * std::ldexp(1.0, -k);
        grid.push_back(lo + step);
        grid.push_back(hi - step);
    }
    if (lo > 0.0) grid.push_back(lo);
    grid.push_back(hi);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

}  // namespace

SignalModel::SignalModel(std::shared_ptr<const DensityFamily> family, SignalSpec spec)
    : family_(std::move(family)), spec_(std::move(spec)) {
    const double lo = spec_.support.lo(), hi = spec_.support.hi();
    nodes_ = numeric::linspace(lo, hi, kBasePanels + 1);
    for (double b : family_->breakpoints()) {
        if (b > lo && b < hi) nodes_.push_back(b);
    }
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());

    const std::size_t panels = nodes_.size() - 1;
    cum_a_.assign(panels + 1, 0.0);
    cum_b_.assign(panels + 1, 0.0);
    cum_moment_.assign(panels + 1, 0.0);
    for (std::size_t i = 0; i < panels; ++i) {
        cum_a_[i + 1] = cum_a_[i] + partial(Integrand::a, i, nodes_[i + 1]);
        cum_b_[i + 1] = cum_b_[i] + partial(Integrand::b, i, nodes_[i + 1]);
        cum_moment_[i + 1] = cum_moment_[i] + partial(Integrand::moment, i, nodes_[i + 1]);
    }

    double sup = 0.0;
    for (double s : probe_grid(spec_.support, 10000)) {
        const double fa = family_->density(s);
        const double fb = family_->over_s(s) * (1.0 - s);
        sup = std::max({sup, fa, fb});
    }
    sup_bound_ = sup;
}

SignalModel SignalModel::from_spec(const SignalSpec& spec) {
    const auto& c = spec.coefficients;
    if (spec.family == "linear") {
        if (!c.empty()) throw ParameterError("linear family takes no coefficients");
        if (!(spec.support == Support(0.0, 1.0))) {
            throw ParameterError("linear family lives on (0, 1)");
        }
        return linear();
    }
    if (spec.family == "truncated_linear") {
        if (!c.empty()) throw ParameterError("truncated_linear family takes no coefficients");
        if (std::abs(spec.support.lo() + spec.support.hi() - 1.0) > 1e-15) {
            throw ParameterError("truncated_linear needs a support symmetric about 1/2");
        }
        return truncated_linear(spec.support.lo());
    }
    if (spec.family == "polynomial") return polynomial(c, spec.support);
    if (spec.family == "piecewise_linear") {
        if (c.size() < 4 || c.size() % 2 != 0) {
            throw ParameterError("piecewise_linear needs at least two (x, y) knots");
        }
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < c.size(); i += 2) {
            xs.push_back(c[i]);
            ys.push_back(c[i + 1]);
        }
        return piecewise_linear(std::move(xs), std::move(ys), spec.support);
    }
    if (spec.family == "lifted_chebyshev") {
        if (c.size() < 6) throw ParameterError("lifted_chebyshev needs at least 6 coefficients");
        LiftingFunction h{c[2], c[3], c[4]};
        if (!(h.a < 0.0 && h.b > 1.0)) {
            throw ParameterError("lifted_chebyshev needs a < 0 and b > 1");
        }
        ChebyshevSeries p(spec.support.lo(), spec.support.hi(),
                          std::vector<double>(c.begin() + 5, c.end()));
        return SignalModel(std::make_shared<LiftedChebyshevFamily>(c[0], c[1], h, std::move(p)),
                           spec);
    }
    throw ParameterError("unknown signal family '" + spec.family + "'");
}

SignalModel SignalModel::linear() {
    return SignalModel(std::make_shared<TruncatedLinearFamily>(0.0),
                       SignalSpec{"linear", {}, Support(0.0, 1.0)});
}

SignalModel SignalModel::truncated_linear(double lo) {
    if (!(lo >= 0.0 && lo < 0.5)) throw ParameterError("truncated_linear needs lo in [0, 1/2)");
    return SignalModel(std::make_shared<TruncatedLinearFamily>(lo),
                       SignalSpec{"truncated_linear", {}, Support(lo, 1.0 - lo)});
}

SignalModel SignalModel::polynomial(std::vector<double> coeffs, Support support) {
    if (coeffs.empty()) throw ParameterError("polynomial needs at least one coefficient");
    for (double x : coeffs) {
        if (!std::isfinite(x)) throw ParameterError("polynomial coefficient is not finite");
    }
    SignalSpec spec{"polynomial", coeffs, support};
    return SignalModel(std::make_shared<PolynomialFamily>(std::move(coeffs)), std::move(spec));
}

SignalModel SignalModel::piecewise_linear(std::vector<double> xs, std::vector<double> ys,
                                          Support support) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw ParameterError("piecewise_linear needs matching knot arrays of length >= 2");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
            throw ParameterError("piecewise_linear knot is not finite");
        }
        if (i > 0 && !(xs[i] > xs[i - 1])) {
            throw ParameterError("piecewise_linear knots must be strictly ascending");
        }
    }
    if (xs.front() < support.lo() || xs.back() > support.hi()) {
        throw ParameterError("piecewise_linear knots must lie in the closed support");
    }
    SignalSpec spec{"piecewise_linear", {}, support};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        spec.coefficients.push_back(xs[i]);
        spec.coefficients.push_back(ys[i]);
    }
    return SignalModel(std::make_shared<PiecewiseLinearFamily>(std::move(xs), std::move(ys)),
                       std::move(spec));
}

SignalModel SignalModel::custom(std::function<double(double)> density, Support support,
                                std::string tag) {
    return SignalModel(std::make_shared<CustomFamily>(std::move(density)),
                       SignalSpec{std::move(tag), {}, support});
}

double SignalModel::density_a(double s) const {
    if (!support().contains_closed(s)) {
        std::ostringstream os;
        os << "s = " << s << " outside the support";
        throw DomainError(os.str());
    }
    return family_->density(s);
}

double SignalModel::density_b(double s) const {
    const double fa = density_a(s);
    if (s == 0.0) return family_->over_s(0.0);
    return fa * (1.0 - s) / s;
}

double SignalModel::density(State state, double s) const {
    return state == State::A ? density_a(s) : density_b(s);
}

double SignalModel::over_s(double s) const {
    if (!support().contains_closed(s)) {
        std::ostringstream os;
        os << "s = " << s << " outside the support";
        throw DomainError(os.str());
    }
    return family_->over_s(s);
}

double SignalModel::integrand(Integrand which, double s) const {
    switch (which) {
        case Integrand::a: return family_->density(s);
        case Integrand::b: return family_->over_s(s) * (1.0 - s);
        case Integrand::moment: return family_->over_s(s) * (1.0 - 2.0 * s);
    }
    return 0.0;
}

double SignalModel::partial(Integrand which, std::size_t panel, double x) const {
    const double a = nodes_[panel];
    if (x <= a) return 0.0;
    return numeric::integrate([this, which](double s) { return integrand(which, s); }, a, x,
                              kPanelTol, kPanelDepth)
        .value;
}

const std::vector<double>& SignalModel::table(Integrand which) const {
    switch (which) {
        case Integrand::a: return cum_a_;
        case Integrand::b: return cum_b_;
        case Integrand::moment: return cum_moment_;
    }
    return cum_a_;
}

std::size_t SignalModel::panel_of(double x) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    std::size_t k = static_cast<std::size_t>(it - nodes_.begin());
    k = k == 0 ? 0 : k - 1;
    return std::min(k, nodes_.size() - 2);
}

double SignalModel::cumulative(Integrand which, double x) const {
    const auto& t = table(which);
    if (x <= support().lo()) return 0.0;
    if (x >= support().hi()) return t.back();
    const std::size_t k = panel_of(x);
    return t[k] + partial(which, k, x);
}

double SignalModel::cdf(State state, double x) const {
    if (!support().contains_closed(x)) {
        std::ostringstream os;
        os << "cdf argument x = " << x << " outside the closed support";
        throw DomainError(os.str());
    }
    return cumulative(state == State::A ? Integrand::a : Integrand::b, x);
}

double SignalModel::moment_cdf(double x) const {
    if (!support().contains_closed(x)) {
        std::ostringstream os;
        os << "moment_cdf argument x = " << x << " outside the closed support";
        throw DomainError(os.str());
    }
    return cumulative(Integrand::moment, x);
}

double SignalModel::sample_at(State state, double u) const {
    const Integrand which = state == State::A ? Integrand::a : Integrand::b;
    const auto& t = table(which);
    const double target = u * t.back();
    auto it = std::upper_bound(t.begin(), t.end(), target);
    std::size_t k = static_cast<std::size_t>(it - t.begin());
    k = k == 0 ? 0 : k - 1;
    k = std::min(k, nodes_.size() - 2);
    const double local = target - t[k];
    double lo = nodes_[k], hi = nodes_[k + 1];
    while (hi - lo > kSampleTol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (partial(which, k, mid) < local) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double SignalModel::sample(State state, RandomStream& rng) const {
    return sample_at(state, rng.uniform());
}

SignalModel balanced_piecewise_linear(const std::vector<double>& xs,
                                      const std::vector<double>& ys, Support support) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw ParameterError("balanced_piecewise_linear needs matching knot arrays");
    }
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (xs[i] < 0.5 && xs[i + 1] > 0.5) {
            throw ParameterError("balanced_piecewise_linear: no segment may straddle 1/2");
        }
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] == 0.5 && ys[i] != 0.0) {
            throw ParameterError("balanced_piecewise_linear: knot at 1/2 must be zero");
        }
    }
    // Mass and moment of the left (s < 1/2) and right (s > 1/2) shapes.
    std::vector<double> left = ys, right = ys;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] > 0.5) left[i] = 0.0;
        if (xs[i] < 0.5) right[i] = 0.0;
    }
    auto mass_and_moment = [&](const std::vector<double>& shape) {
        const auto m = SignalModel::piecewise_linear(xs, shape, support);
        return std::pair{m.cdf(State::A, support.hi()), m.moment_cdf(support.hi())};
    };
    const auto [ml, kl] = mass_and_moment(left);
    const auto [mr, kr] = mass_and_moment(right);
    // wl ml + wr mr = 1 and wl kl + wr kr = 0.
    const double det = ml * kr - mr * kl;
    if (!(kl > 0.0) || !(kr < 0.0) || det == 0.0) {
        throw ParameterError("balanced_piecewise_linear: shape needs mass on both sides of 1/2");
    }
    const double wl = kr / det;
    const double wr = -kl / det;
    std::vector<double> scaled(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        scaled[i] = xs[i] < 0.5 ? wl * ys[i] : wr * ys[i];
    }
    return SignalModel::piecewise_linear(xs, scaled, support);
}

SignalModel balanced_tent(Support support) {
    const double lo = support.lo(), hi = support.hi();
    auto tent_at = [&](double peak) {
        return SignalModel::piecewise_linear({lo, peak, hi}, {0.0, 1.0, 0.0}, support);
    };
    auto moment = [&](double peak) {
        const auto m = tent_at(peak);
        return m.moment_cdf(hi) / m.cdf(State::A, hi);
    };
    const double span = hi - lo;
    const double peak = numeric::bisect(moment, lo + 1e-6 * span, hi - 1e-6 * span, 1e-15);
    const auto raw = tent_at(peak);
    const double mass = raw.cdf(State::A, hi);
    return SignalModel::piecewise_linear({lo, peak, hi}, {0.0, 1.0 / mass, 0.0}, support);
}

// ---- Validation ----------------------------------------------------------

std::vector<std::string> ValidationReport::failures() const {
    std::vector<std::string> out;
    for (const auto* c : {&normalization, &moment, &nonnegativity, &boundedness}) {
        if (!c->pass) out.push_back(c->name);
    }
    return out;
}

ValidationReport validate(const SignalModel& model, double tol,
                          const ValidationOptions& options) {
    const Support& sup = model.support();
    ValidationReport r;
    const auto grid = probe_grid(sup, options.grid_points);
    r.grid_points = grid.size();

    double min_f = std::numeric_limits<double>::infinity();
    double max_q = 0.0;
    for (double s : grid) {
        const double f = model.family().density(s);
        require_finite(f, s, "density");
        const double q = s > 0.0 ? f * (1.0 - s) / s : model.family().over_s(0.0);
        min_f = std::min(min_f, f);
        max_q = std::max({max_q, f, q});
    }
    for (double b : model.family().breakpoints()) {
        if (sup.contains_closed(b)) min_f = std::min(min_f, model.family().density(b));
    }

    const double mass = model.cdf(State::A, sup.hi());
    const double moment = model.moment_cdf(sup.hi());
    r.density_b_mass = model.cdf(State::B, sup.hi());

    r.normalization = {"normalization", std::abs(mass - 1.0), tol, std::abs(mass - 1.0) <= tol};
    r.moment = {"moment", std::abs(moment), tol, std::abs(moment) <= tol};
    r.nonnegativity = {"nonnegativity", min_f, tol, min_f >= -tol};
    const bool bounded = std::isfinite(max_q) && max_q <= options.boundedness_cap;
    r.boundedness = {"boundedness", max_q, options.boundedness_cap, bounded};
    r.pass = r.normalization.pass && r.moment.pass && r.nonnegativity.pass && r.boundedness.pass;
    return r;
}

ValidationReport validate(const std::function<double(double)>& density, const Support& support,
                          double tol, const ValidationOptions& options) {
    for (double s : probe_grid(support, options.grid_points)) {
        require_finite(density(s), s, "density");
    }
    return validate(SignalModel::custom(density, support), tol, options);
}

double density_b(const SignalModel& model, double s) { return model.density_b(s); }

double cdf(const SignalModel& model, State state, double x) { return model.cdf(state, x); }

double sample(const SignalModel& model, State state, RandomStream& rng) {
    return model.sample(state, rng);
}

std::optional<ClosedInterval> is_locally_zero(const SignalModel& model,
                                              std::size_t grid_resolution) {
    if (grid_resolution < 2) return std::nullopt;
    const double lo = model.support().lo(), hi = model.support().hi();
    std::optional<ClosedInterval> best;
    double best_len = -1.0;
    std::size_t run_start = 0;
    std::size_t run_len = 0;
    auto at = [&](std::size_t i) {
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_resolution);
    };
    auto close_run = [&](std::size_t end_exclusive) {
        if (run_len >= 2) {
            const double z1 = at(run_start), z2 = at(end_exclusive - 1);
            if (z2 - z1 > best_len) {
                best_len = z2 - z1;
                best = ClosedInterval{z1, z2};
            }
        }
        run_len = 0;
    };
    for (std::size_t i = 1; i < grid_resolution; ++i) {
        if (model.family().density(at(i)) <= kLocallyZeroTolerance) {
            if (run_len == 0) run_start = i;
            ++run_len;
        } else {
            close_run(i);
        }
    }
    close_run(grid_resolution);
    return best;
}

}  // namespace conflearn
