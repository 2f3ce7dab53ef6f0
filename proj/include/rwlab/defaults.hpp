#pragma once

#include <vector>

namespace rwlab {

/// Every tunable default in one place. The CLI exposes each as a flag.
///
/// The numeric tolerances are calibration choices for finite-support laws,
/// not constants taken from the asymptotic statements (those carry none).
struct Defaults {
    // exact engine
    double mass_tol = 1e-10;
    double identity_tol = 1e-10;
    double duality_tol = 1e-12;
    double nu_x_max_multiple = 8.0;
    double nu_tail_tol = 1e-6;
    long long strip_window_multiple = 16;

    // potential theory
    long long potential_window = 160;
    long long partial_sum_window = 50;
    long long partial_sum_steps = 1 << 17;
    double quadrature_tol = 1e-12;
    double cross_method_tol = 1e-6;
    double harmonicity_tol = 1e-8;

    // ladder theory
    long long harmonic_window = 400;
    double ladder_tol = 1e-10;
    double f_harmonic_tol = 1e-6;
    double edge_ratio_tol = 0.05;
    double ladder_mean_tol = 1e-8;
    double identity_soft_tol = 1e-6;

    // verify
    double a_circ = 2.0;
    std::vector<long long> n_ladder = {256, 1024, 4096};
    double scaled_coordinate = 0.2;
    double trend_tol = 0.1;
    double entrance_tol = 0.15;
    double nu_tol = 0.15;
    double bound_drift_tol = 0.2;
    double bound_fit_margin = 1.2;
    double kernel_tol = 1e-8;
    double alpha = 0.5;
    double particle_ell = 1.0;
};

/// Process-wide defaults. The CLI applies flag overrides through
/// mutable_defaults() before any computation starts.
inline Defaults& mutable_defaults() {
    static Defaults d{};
    return d;
}

inline const Defaults& defaults() { return mutable_defaults(); }

}  // namespace rwlab
