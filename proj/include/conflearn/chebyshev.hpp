#pragma once

#include <functional>
#include <vector>

namespace conflearn {

// Truncated Chebyshev series sum_k c_k T_k(t), t = (2x - lo - hi) / (hi - lo),
// on the closed interval [lo, hi].
class ChebyshevSeries {
public:
    ChebyshevSeries() = default;
    ChebyshevSeries(double lo, double hi, std::vector<double> coeffs);

    // Interpolant through the degree+1 Chebyshev points of the first kind.
    // This is within a log(degree) factor of the best uniform approximation.
    static ChebyshevSeries interpolate(const std::function<double(double)>& f,
                                       double lo, double hi, std::size_t degree);

    double operator()(double x) const noexcept;

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    std::size_t degree() const noexcept {
        return coeffs_.empty() ? 0 : coeffs_.size() - 1;
    }
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }

    ChebyshevSeries& operator+=(const ChebyshevSeries& other);
    ChebyshevSeries& operator*=(double k) noexcept;

private:
    double lo_ = 0.0;
    double hi_ = 1.0;
    std::vector<double> coeffs_;
};

ChebyshevSeries operator-(ChebyshevSeries a, const ChebyshevSeries& b);
ChebyshevSeries operator*(double k, ChebyshevSeries a);

}  // namespace conflearn
