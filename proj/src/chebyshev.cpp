#include "conflearn/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace conflearn {

ChebyshevSeries::ChebyshevSeries(double lo, double hi, std::vector<double> coeffs)
    : lo_(lo), hi_(hi), coeffs_(std::move(coeffs)) {
    if (!(lo < hi)) throw std::invalid_argument("ChebyshevSeries: lo must be < hi");
}

ChebyshevSeries ChebyshevSeries::interpolate(const std::function<double(double)>& f,
                                             double lo, double hi,
                                             std::size_t degree) {
    const std::size_t n = degree + 1;
    std::vector<double> values(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double theta = std::numbers::pi * (static_cast<double>(j) + 0.5) /
                             static_cast<double>(n);
        const double t = std::cos(theta);
        values[j] = f(0.5 * (lo + hi) + 0.5 * (hi - lo) * t);
    }
    std::vector<double> coeffs(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double theta = std::numbers::pi * (static_cast<double>(j) + 0.5) /
                                 static_cast<double>(n);
            acc += values[j] * std::cos(static_cast<double>(k) * theta);
        }
        coeffs[k] = (k == 0 ? 1.0 : 2.0) * acc / static_cast<double>(n);
    }
    return ChebyshevSeries(lo, hi, std::move(coeffs));
}

double ChebyshevSeries::operator()(double x) const noexcept {
    if (coeffs_.empty()) return 0.0;
    const double t = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
    // Clenshaw recurrence.
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) {
        const double b0 = 2.0 * t * b1 - b2 + coeffs_[k];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + coeffs_[0];
}

ChebyshevSeries& ChebyshevSeries::operator+=(const ChebyshevSeries& other) {
    if (other.lo_ != lo_ || other.hi_ != hi_) {
        throw std::invalid_argument("ChebyshevSeries: interval mismatch");
    }
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
    return *this;
}

ChebyshevSeries& ChebyshevSeries::operator*=(double k) noexcept {
    for (auto& c : coeffs_) c *= k;
    return *this;
}

ChebyshevSeries operator-(ChebyshevSeries a, const ChebyshevSeries& b) {
    ChebyshevSeries neg = b;
    neg *= -1.0;
    a += neg;
    return a;
}

ChebyshevSeries operator*(double k, ChebyshevSeries a) {
    a *= k;
    return a;
}

}  // namespace conflearn
