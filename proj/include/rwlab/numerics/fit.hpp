#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "rwlab/error.hpp"

namespace rwlab::numerics {

/// Least-squares coefficients of sum_k c_k basis_k(t) through (t_i, y_i).
template <class Basis>
std::vector<double> least_squares(const std::vector<double>& t, const std::vector<double>& y,
                                  int nbasis, Basis&& basis) {
    require(t.size() == y.size() && static_cast<int>(t.size()) >= nbasis,
            ErrorCode::InvalidArgument, "least_squares: not enough points");
    Eigen::MatrixXd A(static_cast<Eigen::Index>(t.size()), nbasis);
    Eigen::VectorXd b(static_cast<Eigen::Index>(t.size()));
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (int k = 0; k < nbasis; ++k) A(static_cast<Eigen::Index>(i), k) = basis(k, t[i]);
        b(static_cast<Eigen::Index>(i)) = y[i];
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    return {c.data(), c.data() + c.size()};
}

/// Polynomial fit y ~ c_0 + c_1 t + ... + c_deg t^deg.
inline std::vector<double> polyfit(const std::vector<double>& t, const std::vector<double>& y,
                                   int degree) {
    return least_squares(t, y, degree + 1,
                         [](int k, double s) { return std::pow(s, static_cast<double>(k)); });
}

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
};

inline LineFit linear_fit(const std::vector<double>& t, const std::vector<double>& y) {
    const auto c = polyfit(t, y, 1);
    return {c[0], c[1]};
}

/// Slope of log(y) against log(n); entries with y <= 0 are skipped.
inline double log_log_slope(const std::vector<double>& n, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < n.size(); ++i)
        if (y[i] > 0.0 && n[i] > 0.0) {
            lx.push_back(std::log(n[i]));
            ly.push_back(std::log(y[i]));
        }
    if (lx.size() < 2) return std::nan("");
    return linear_fit(lx, ly).slope;
}

}  // namespace rwlab::numerics
