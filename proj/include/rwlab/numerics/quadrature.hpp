#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "rwlab/error.hpp"

namespace rwlab::numerics {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

/// Composite 20-point Gauss-Legendre on [a, b], doubling the panel count
/// until two successive estimates differ by less than tol.
template <class F>
QuadratureResult integrate_panels(F&& f, double a, double b, double tol, int initial_panels = 8,
                                  int max_panels = 1 << 16) {
    using GL = boost::math::quadrature::gauss<double, 20>;
    auto composite = [&](int panels) {
        const double h = (b - a) / panels;
        double s = 0.0, c = 0.0;
        for (int i = 0; i < panels; ++i) {
            const double lo = a + i * h;
            const double v = GL::integrate(f, lo, lo + h);
            const double y = v - c;
            const double t = s + y;
            c = (t - s) - y;
            s = t;
        }
        return s;
    };
    int panels = std::max(1, initial_panels);
    double prev = composite(panels);
    while (panels < max_panels) {
        panels *= 2;
        const double cur = composite(panels);
        const double diff = std::fabs(cur - prev);
        if (diff < tol) return {cur, diff, panels};
        prev = cur;
    }
    fail(ErrorCode::QuadratureNotConverged,
         "panel quadrature did not reach tolerance " + std::to_string(tol) + " with " +
             std::to_string(max_panels) + " panels");
}

/// Integral over [a, infinity) of a smooth decaying integrand.
template <class F>
QuadratureResult integrate_to_infinity(F&& f, double a, double tol = 1e-14) {
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0, l1 = 0.0;
    std::size_t levels = 0;
    const double v = integrator.integrate([&](double t) { return f(a + t); }, 0.0,
                                          std::numeric_limits<double>::infinity(), tol, &err,
                                          &l1, &levels);
    return {v, err, static_cast<int>(levels)};
}

/// Integral over a finite interval of an integrand with endpoint singularities.
template <class F>
QuadratureResult integrate_tanh_sinh(F&& f, double a, double b, double tol = 1e-14) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    double err = 0.0, l1 = 0.0;
    std::size_t levels = 0;
    const double v = integrator.integrate(f, a, b, tol, &err, &l1, &levels);
    return {v, err, static_cast<int>(levels)};
}

}  // namespace rwlab::numerics
