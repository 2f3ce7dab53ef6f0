#pragma once

#include <array>
#include <cmath>

#include "rwlab/error.hpp"

namespace rwlab::numerics {

/// sin(u) - u, accurate for small |u|.
inline double sin_minus_id(double u) {
    if (std::fabs(u) > 0.5) return std::sin(u) - u;
    const double u2 = u * u;
    double term = -u * u2 / 6.0;
    double s = term;
    for (int k = 2; k < 12; ++k) {
        term *= -u2 / ((2.0 * k) * (2.0 * k + 1.0));
        s += term;
        if (std::fabs(term) < 1e-18 * std::fabs(s)) break;
    }
    return s;
}

/// 1 - cos(u) in the cancellation-free form.
inline double one_minus_cos(double u) {
    const double s = std::sin(0.5 * u);
    return 2.0 * s * s;
}

/// Hurwitz zeta sum_{m>=0} (a+m)^{-s} for a > 0, continued analytically to
/// s in (0, 1) as well. Euler-Maclaurin after shifting a past 12.
inline double hurwitz_zeta(double s, double a) {
    require(a > 0.0, ErrorCode::InvalidArgument, "hurwitz_zeta needs a > 0");
    require(s != 1.0, ErrorCode::InvalidArgument, "hurwitz_zeta pole at s = 1");
    static constexpr std::array<double, 10> b2k = {
        1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66,
        -691.0 / 2730, 7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330};
    double head = 0.0;
    double b = a;
    while (b < 12.0) {
        head += std::pow(b, -s);
        b += 1.0;
    }
    double tail = std::pow(b, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(b, -s);
    // sum_k B_{2k}/(2k)! * s(s+1)...(s+2k-2) * b^{-s-2k+1}
    double rising = s;   // s (s+1) ... (s+2k-2)
    double fact = 2.0;   // (2k)!
    double bp = std::pow(b, -s - 1.0);
    for (std::size_t k = 1; k <= b2k.size(); ++k) {
        const double term = b2k[k - 1] / fact * rising * bp;
        tail += term;
        if (std::fabs(term) < 1e-17 * std::fabs(tail)) break;
        rising *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
        bp /= b * b;
    }
    return head + tail;
}

}  // namespace rwlab::numerics
