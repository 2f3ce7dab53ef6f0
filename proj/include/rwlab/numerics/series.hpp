#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rwlab/error.hpp"

namespace rwlab::numerics {

/// Truncated power series c_0 + c_1 t + ... + c_{N-1} t^{N-1}.
class Series {
public:
    explicit Series(std::size_t order = 0) : c_(order, 0.0) {}
    explicit Series(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

    [[nodiscard]] std::size_t order() const noexcept { return c_.size(); }
    double& operator[](std::size_t k) { return c_[k]; }
    double operator[](std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
    [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return c_; }

    /// Drops the first k coefficients (divides by t^k); they must vanish.
    [[nodiscard]] Series shifted_down(std::size_t k) const {
        Series out(c_.size() > k ? c_.size() - k : 0);
        for (std::size_t i = 0; i < out.order(); ++i) out.c_[i] = c_[i + k];
        return out;
    }

    [[nodiscard]] double eval(double t) const {
        double s = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) s = s * t + c_[i];
        return s;
    }

    /// Integral from 0 to t.
    [[nodiscard]] double integrate(double t) const {
        double s = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) s = s * t + c_[i] / static_cast<double>(i + 1);
        return s * t;
    }

    friend Series operator+(const Series& a, const Series& b) {
        Series out(std::max(a.order(), b.order()));
        for (std::size_t i = 0; i < out.order(); ++i) out.c_[i] = a[i] + b[i];
        return out;
    }
    friend Series operator-(const Series& a, const Series& b) {
        Series out(std::max(a.order(), b.order()));
        for (std::size_t i = 0; i < out.order(); ++i) out.c_[i] = a[i] - b[i];
        return out;
    }
    friend Series operator*(double k, const Series& a) {
        Series out = a;
        for (auto& v : out.c_) v *= k;
        return out;
    }
    friend Series operator*(const Series& a, const Series& b) {
        const std::size_t n = std::min(a.order(), b.order());
        Series out(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; i + j < n; ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
        return out;
    }
    friend Series operator/(const Series& a, const Series& b) {
        require(b.order() > 0 && b.c_[0] != 0.0, ErrorCode::InvalidArgument,
                "series division by a series with zero constant term");
        const std::size_t n = std::min(a.order(), b.order());
        Series out(n);
        for (std::size_t k = 0; k < n; ++k) {
            double s = a.c_[k];
            for (std::size_t j = 1; j <= k; ++j) s -= b.c_[j] * out.c_[k - j];
            out.c_[k] = s / b.c_[0];
        }
        return out;
    }

private:
    std::vector<double> c_;
};

/// Series of 1 - cos(w t).
inline Series one_minus_cos_series(double w, std::size_t order) {
    Series s(order);
    double term = 1.0;  // (w t)^k / k!
    for (std::size_t k = 1; k < order; ++k) {
        term *= w / static_cast<double>(k);
        if (k % 2 == 0) s[k] = (k % 4 == 2) ? term : -term;
    }
    return s;
}

/// Series of sin(w t).
inline Series sin_series(double w, std::size_t order) {
    Series s(order);
    double term = 1.0;
    for (std::size_t k = 1; k < order; ++k) {
        term *= w / static_cast<double>(k);
        if (k % 2 == 1) s[k] = (k % 4 == 1) ? term : -term;
    }
    return s;
}

}  // namespace rwlab::numerics
