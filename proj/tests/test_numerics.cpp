#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rwlab/error.hpp"
#include "rwlab/numerics/fit.hpp"
#include "rwlab/numerics/quadrature.hpp"
#include "rwlab/numerics/series.hpp"
#include "rwlab/numerics/special.hpp"
#include "rwlab/numerics/summation.hpp"

using namespace rwlab;
using namespace rwlab::numerics;

TEST(CompensatedSum, RecoversCancelledMass) {
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i) s.add(1e-16);
    s.add(-1.0);
    // Kahan error stays near one ulp of the largest partial sum
    EXPECT_NEAR(s.value(), 1e-13, 1e-20);
}

TEST(HurwitzZeta, AgainstReferenceValues) {
    // reference values from 30-digit arithmetic
    EXPECT_NEAR(hurwitz_zeta(0.5, 0.3), 0.0111527803099698560920, 1e-13);
    EXPECT_NEAR(hurwitz_zeta(0.5, 1.0), -1.46035450880958681289, 1e-13);
    EXPECT_NEAR(hurwitz_zeta(0.5, 7.25), -5.19733755994083142148, 1e-13);
    EXPECT_NEAR(hurwitz_zeta(1.5, 2.5), 1.40377976885682579582, 1e-13);
    EXPECT_NEAR(hurwitz_zeta(0.5, 0.5), -0.604898643421630370247, 1e-13);
}

TEST(HurwitzZeta, ShiftRecurrence) {
    for (double a : {0.1, 0.75, 3.0, 20.5})
        EXPECT_NEAR(hurwitz_zeta(0.5, a) - hurwitz_zeta(0.5, a + 1.0), std::pow(a, -0.5), 1e-12);
}

TEST(Special, SmallArgumentForms) {
    for (double u : {1e-8, 1e-3, 0.3, 0.49, 0.6, 2.0}) {
        EXPECT_NEAR(sin_minus_id(u), std::sin(u) - u, 1e-17 + 1e-12 * std::fabs(std::sin(u) - u));
        EXPECT_NEAR(one_minus_cos(u), 1.0 - std::cos(u), 1e-16);
    }
    EXPECT_NEAR(sin_minus_id(1e-3), -1e-9 / 6.0 + 1e-15 / 120.0, 1e-24);
}

TEST(Series, TrigSeriesMatchFunctions) {
    const double w = 1.7;
    const auto s = sin_series(w, 24);
    const auto c = one_minus_cos_series(w, 24);
    for (double t : {0.0, 0.1, 0.4}) {
        EXPECT_NEAR(s.eval(t), std::sin(w * t), 1e-14);
        EXPECT_NEAR(c.eval(t), 1.0 - std::cos(w * t), 1e-14);
    }
    // integral of sin(w t) from 0 to 0.4
    EXPECT_NEAR(s.integrate(0.4), (1.0 - std::cos(w * 0.4)) / w, 1e-14);
}

TEST(Quadrature, Panels) {
    const auto r = integrate_panels([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-13);
    EXPECT_NEAR(r.value, 2.0, 1e-13);
    EXPECT_LT(r.error, 1e-12);
}

TEST(Quadrature, PanelsReportNonConvergence) {
    try {
        integrate_panels([](double x) { return std::sin(1e6 * x * x); }, 0.0, 10.0, 1e-15, 2, 16);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::QuadratureNotConverged);
    }
}

TEST(Quadrature, InfiniteAndEndpointSingular) {
    EXPECT_NEAR(integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0).value, 1.0, 1e-13);
    EXPECT_NEAR(integrate_tanh_sinh([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0).value, 2.0,
                1e-12);
}

TEST(Fit, PolyfitRecoversCubic) {
    std::vector<double> t, y;
    for (int i = 0; i < 9; ++i) {
        const double x = 0.25 * i;
        t.push_back(x);
        y.push_back(1.0 - 2.0 * x + 0.5 * x * x * x);
    }
    const auto c = polyfit(t, y, 3);
    EXPECT_NEAR(c[0], 1.0, 1e-12);
    EXPECT_NEAR(c[1], -2.0, 1e-12);
    EXPECT_NEAR(c[2], 0.0, 1e-12);
    EXPECT_NEAR(c[3], 0.5, 1e-12);
}

TEST(Fit, LogLogSlope) {
    std::vector<double> n = {256, 1024, 4096}, y;
    for (double v : n) y.push_back(3.0 / std::sqrt(v));
    EXPECT_NEAR(log_log_slope(n, y), -0.5, 1e-12);
    const auto f = linear_fit({0.0, 1.0, 2.0}, {1.0, 3.0, 5.0});
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
}
