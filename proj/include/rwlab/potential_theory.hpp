#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rwlab/error.hpp"
#include "rwlab/exact_engine.hpp"
#include "rwlab/ladder_theory.hpp"
#include "rwlab/numerics/fit.hpp"
#include "rwlab/numerics/quadrature.hpp"
#include "rwlab/numerics/series.hpp"
#include "rwlab/numerics/special.hpp"
#include "rwlab/walk_model.hpp"

namespace rwlab {

enum class PotentialMethod { PartialSum, Fourier };

inline const char* to_string(PotentialMethod m) {
    return m == PotentialMethod::PartialSum ? "partial_sum" : "fourier";
}

/// a(x) on [-X, X] with per-entry error estimates.
struct PotentialTable {
    long long X = 0;
    PotentialMethod method = PotentialMethod::Fourier;
    double sigma2 = 0.0;
    std::vector<double> a_values;
    std::vector<double> a_star_values;
    std::vector<double> error_estimate;

    [[nodiscard]] bool contains(long long x) const noexcept { return x >= -X && x <= X; }

    [[nodiscard]] double a(long long x) const {
        require(contains(x), ErrorCode::OutOfWindow,
                "a(" + std::to_string(x) + ") outside window [-" + std::to_string(X) + ", " +
                    std::to_string(X) + "]");
        return a_values[static_cast<std::size_t>(x + X)];
    }
    [[nodiscard]] double a_star(long long x) const { return a(x) + (x == 0 ? 1.0 : 0.0); }
    [[nodiscard]] double error(long long x) const {
        require(contains(x), ErrorCode::OutOfWindow, "error estimate outside window");
        return error_estimate[static_cast<std::size_t>(x + X)];
    }
    [[nodiscard]] double max_error() const {
        return error_estimate.empty() ? 0.0
                                      : *std::max_element(error_estimate.begin(), error_estimate.end());
    }
};

namespace detail {

inline PotentialTable make_table(long long X, PotentialMethod m, double sigma2) {
    PotentialTable t;
    t.X = X;
    t.method = m;
    t.sigma2 = sigma2;
    t.a_values.assign(static_cast<std::size_t>(2 * X + 1), 0.0);
    t.a_star_values.assign(t.a_values.size(), 0.0);
    t.error_estimate.assign(t.a_values.size(), 0.0);
    return t;
}

inline void finish_table(PotentialTable& t) {
    for (long long x = -t.X; x <= t.X; ++x)
        t.a_star_values[static_cast<std::size_t>(x + t.X)] =
            t.a_values[static_cast<std::size_t>(x + t.X)] + (x == 0 ? 1.0 : 0.0);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fourier route

/// Precomputed characteristic-function data for the potential integrals.
class FourierKernel {
public:
    static constexpr std::size_t kOrder = 48;

    explicit FourierKernel(const StepLaw& law) : law_(law) {
        sigma2_ = static_cast<double>(moments(law).sigma2);
        zmax_ = std::max(std::abs(law.support_min), std::abs(law.support_max));
        A_ = numerics::Series(kOrder);
        B_ = numerics::Series(kOrder);
        for (int z = law.support_min; z <= law.support_max; ++z) {
            const double w = law.p(z);
            if (w == 0.0) continue;
            A_ = A_ + w * numerics::one_minus_cos_series(z, kOrder);
            B_ = B_ + w * numerics::sin_series(z, kOrder);
        }
        B_[1] = 0.0;  // the mean vanishes exactly
        D_hat_ = (A_ * A_ + B_ * B_).shifted_down(4);
    }

    [[nodiscard]] double sigma2() const noexcept { return sigma2_; }
    [[nodiscard]] int zmax() const noexcept { return zmax_; }
    [[nodiscard]] const StepLaw& law() const noexcept { return law_; }

    /// (1 - Re phi, -Im phi) evaluated without cancellation.
    void AB(double l, double& A, double& B) const {
        A = 0.0;
        B = 0.0;
        for (int z = law_.support_min; z <= law_.support_max; ++z) {
            const double w = law_.p(z);
            if (w == 0.0) continue;
            A += w * numerics::one_minus_cos(z * l);
            B += w * numerics::sin_minus_id(z * l);
        }
    }

    /// Smooth remainder of the a(x) integrand on l > 0.
    [[nodiscard]] double a_remainder(double l, long long x) const {
        double A, B;
        AB(l, A, B);
        const double xl = static_cast<double>(x) * l;
        const double omc = numerics::one_minus_cos(xl);
        return (omc * A + std::sin(xl) * B) / (A * A + B * B) - 2.0 * omc / (sigma2_ * l * l);
    }

    /// Taylor series of a_remainder around l = 0.
    [[nodiscard]] numerics::Series a_remainder_series(long long x) const {
        const double xd = static_cast<double>(x);
        const auto omc = numerics::one_minus_cos_series(xd, kOrder);
        const auto sn = numerics::sin_series(xd, kOrder);
        const auto N_hat = (omc * A_ + sn * B_).shifted_down(4);
        const auto singular = (2.0 / sigma2_) * omc.shifted_down(2);
        return N_hat / D_hat_ - singular;
    }

    /// sigma^2 Re{1/(1-phi)} - shift(l), shift = 1/(1-cos l) or 2/l^2.
    [[nodiscard]] double c_star_integrand(double l, bool cosine_shift) const {
        double A, B;
        AB(l, A, B);
        const double shift = cosine_shift ? 1.0 / numerics::one_minus_cos(l) : 2.0 / (l * l);
        return sigma2_ * A / (A * A + B * B) - shift;
    }

    [[nodiscard]] numerics::Series c_star_series(bool cosine_shift) const {
        const auto A_hat = A_.shifted_down(2);
        auto bracket = sigma2_ * (A_hat / D_hat_);
        if (cosine_shift) {
            const auto c_hat = numerics::one_minus_cos_series(1.0, kOrder).shifted_down(2);
            numerics::Series one(c_hat.order());
            one[0] = 1.0;
            bracket = bracket - one / c_hat;
        } else {
            bracket[0] -= 2.0;
        }
        return bracket.shifted_down(2);
    }

private:
    StepLaw law_;
    double sigma2_ = 1.0;
    int zmax_ = 1;
    numerics::Series A_, B_, D_hat_;
};

struct FourierValue {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

/// T(x) = int_pi^inf (1 - cos xl) / l^2 dl for integer x != 0, via the rotated
/// contour int_A^inf e^{iu} u^{-2} du = i e^{iA} int_0^inf e^{-t} (A+it)^{-2} dt.
inline FourierValue singular_tail(long long x) {
    const double ax = static_cast<double>(std::llabs(x));
    const double A = M_PI * ax;
    auto r = numerics::integrate_to_infinity(
        [A](double t) {
            const double q = A * A + t * t;
            return std::exp(-t) * 2.0 * A * t / (q * q);
        },
        0.0, 1e-15);
    const double sign = (std::llabs(x) % 2 == 0) ? 1.0 : -1.0;
    return {1.0 / M_PI - ax * sign * r.value, ax * r.error};
}

}  // namespace detail

/// a(x) = (1/2pi) int Re{(1 - e^{ixl}) / (1 - phi(l))} dl.
///
/// The singular part 2(1 - cos xl) / (sigma^2 l^2) is integrated in closed
/// form up to a tail integral; the remainder uses a Taylor patch on [0, l0]
/// and panel quadrature on [l0, pi].
inline FourierValue a_fourier(const FourierKernel& K, long long x, double tol = 1e-12) {
    if (x == 0) return {0.0, 0.0};
    const double ax = static_cast<double>(std::llabs(x));
    const double l0 = 0.25 / std::max<double>(ax, K.zmax());
    const auto series = K.a_remainder_series(x);
    const double patch = series.integrate(l0);
    const int panels0 = std::max(4, static_cast<int>(std::ceil(ax / 2.0)));
    const auto quad = numerics::integrate_panels([&](double l) { return K.a_remainder(l, x); }, l0,
                                                 M_PI, tol * M_PI, panels0);
    const auto tail = detail::singular_tail(x);
    const double smooth = (patch + quad.value) / M_PI;
    const double sing = (ax - 2.0 / M_PI * tail.value) / K.sigma2();
    return {smooth + sing, quad.error / M_PI + 2.0 / M_PI * tail.error / K.sigma2() +
                               1e-15 * (std::fabs(smooth) + std::fabs(sing))};
}

inline FourierValue a_fourier(const StepLaw& law, long long x, double tol = 1e-12) {
    return a_fourier(FourierKernel(law), x, tol);
}

inline PotentialTable a_fourier_table(const StepLaw& law, long long X, double tol = 1e-12) {
    require(X >= 1, ErrorCode::InvalidArgument, "potential window must be positive");
    const FourierKernel K(law);
    auto t = detail::make_table(X, PotentialMethod::Fourier, K.sigma2());
    for (long long x = -X; x <= X; ++x) {
        const auto v = a_fourier(K, x, tol);
        t.a_values[static_cast<std::size_t>(x + X)] = v.value;
        t.error_estimate[static_cast<std::size_t>(x + X)] = v.error;
    }
    detail::finish_table(t);
    return t;
}

/// C* by quadrature, with either the 1/(1 - cos l) or the 2/l^2 shift.
inline FourierValue c_star_quadrature(const FourierKernel& K, bool cosine_shift,
                                      double tol = 1e-13) {
    const double l0 = 0.25 / K.zmax();
    const double patch = K.c_star_series(cosine_shift).integrate(l0);
    const auto quad = numerics::integrate_panels(
        [&](double l) { return K.c_star_integrand(l, cosine_shift); }, l0, M_PI, tol, 8);
    double v = (patch + quad.value) / M_PI;
    if (!cosine_shift) v -= 2.0 / (M_PI * M_PI);
    return {v, quad.error / M_PI + 1e-15};
}

// ---------------------------------------------------------------------------
// Partial-sum route

struct PartialSumResult {
    double value = 0.0;        ///< sum_{k=0}^{K} [p^k(0) - p^k(-x)]
    double remainder = 0.0;    ///< Gaussian estimate of the omitted tail
    double extrapolated = 0.0; ///< limit extrapolated from checkpoints
    double error = 0.0;        ///< estimate for |extrapolated - a(x)|
};

namespace detail {

/// Gaussian approximation of sum_{k>K} [p^k(0) - p^k(-x)] on the walk's
/// sublattice, summed in closed form through Hurwitz zeta values.
inline double gaussian_tail(const LatticeStructure& ls, double sigma2, long long K, long long x) {
    if (x == 0) return 0.0;
    const long long d = ls.period;
    auto first_after = [&](long long displacement) {
        long long k = K + 1;
        while (!reachable(ls, k, displacement)) ++k;
        return k;
    };
    const long long k0 = first_after(0);
    const long long kx = first_after(-x);
    const double dd = static_cast<double>(d);
    auto zeta_class = [&](double s, long long k) {
        return std::pow(dd, -s) * numerics::hurwitz_zeta(s, static_cast<double>(k) / dd);
    };
    const double c = static_cast<double>(x) * static_cast<double>(x) / (2.0 * sigma2);
    double total = (k0 == kx) ? 0.0 : zeta_class(0.5, k0) - zeta_class(0.5, kx);
    double coef = 1.0;
    for (int j = 1; j < 60; ++j) {
        coef *= -c / j;
        const double term = -coef * zeta_class(j + 0.5, kx);
        total += term;
        if (std::fabs(term) < 1e-18 * std::max(1.0, std::fabs(total))) break;
    }
    return dd / std::sqrt(2.0 * M_PI * sigma2) * total;
}

struct PartialSumRun {
    std::vector<long long> checkpoints;    ///< descending
    std::vector<std::vector<double>> sums;  ///< sums[j][x + X]
    double trimmed = 0.0;
};

inline PartialSumRun partial_sum_run(const StepLaw& law, long long X,
                                     const std::vector<long long>& checkpoints) {
    PartialSumRun run;
    run.checkpoints = checkpoints;
    run.sums.resize(checkpoints.size());
    const long long Kmax = *std::max_element(checkpoints.begin(), checkpoints.end());
    std::vector<numerics::CompensatedSum> acc(static_cast<std::size_t>(2 * X + 1));
    for (long long x = -X; x <= X; ++x)
        if (x != 0) acc[static_cast<std::size_t>(x + X)].add(1.0);  // k = 0 term
    Evolver ev(law, KillMode::Free);
    ev.reset(0);
    ev.set_trim_threshold(1e-40);
    for (long long k = 1; k <= Kmax; ++k) {
        ev.step();
        const auto& d = ev.state();
        const double p0 = d.at(0);
        for (long long x = -X; x <= X; ++x) acc[static_cast<std::size_t>(x + X)].add(p0 - d.at(-x));
        for (std::size_t j = 0; j < checkpoints.size(); ++j)
            if (checkpoints[j] == k) {
                run.sums[j].resize(acc.size());
                for (std::size_t i = 0; i < acc.size(); ++i) run.sums[j][i] = acc[i].value();
            }
    }
    run.trimmed = ev.trimmed_mass();
    return run;
}

inline std::vector<long long> partial_sum_checkpoints(long long Kmax, int period) {
    std::vector<long long> ks;
    for (int j = 0; j <= 8; ++j) {
        long long k = static_cast<long long>(std::floor(Kmax * std::pow(2.0, -j / 4.0)));
        k -= k % period;
        if (ks.empty() || ks.back() != k) ks.push_back(k);
    }
    return ks;
}

/// Least-squares extrapolation in t = sqrt(Kmax / K) of the tail-corrected
/// sums; value from a degree-6 fit, error from its distance to degree 5.
inline std::pair<double, double> extrapolate(const std::vector<long long>& ks,
                                             const std::vector<double>& corrected) {
    const double kmax = static_cast<double>(ks.front());
    std::vector<double> t;
    for (long long k : ks) t.push_back(std::sqrt(kmax / static_cast<double>(k)));
    const int hi = std::min<int>(6, static_cast<int>(ks.size()) - 2);
    const auto c6 = numerics::polyfit(t, corrected, hi);
    const auto c5 = numerics::polyfit(t, corrected, hi - 1);
    return {c6[0], std::fabs(c6[0] - c5[0])};
}

}  // namespace detail

// the remainder after the Gaussian tail grows like x^4 K^{-3/2}; 2^17 keeps |x| <= 50 below 1e-8
inline constexpr long long kDefaultPartialSumSteps = 1 << 17;

/// All partial-sum data for |x| <= X from one free run of Kmax steps.
inline PotentialTable a_partial_sums_table(const StepLaw& law, long long X,
                                           long long Kmax = kDefaultPartialSumSteps) {
    require(X >= 1 && Kmax >= 64, ErrorCode::InvalidArgument,
            "partial-sum table needs X >= 1 and at least 64 steps");
    const auto ls = lattice_structure(law);
    const double sigma2 = static_cast<double>(moments(law).sigma2);
    const auto ks = detail::partial_sum_checkpoints(Kmax, ls.period);
    const auto run = detail::partial_sum_run(law, X, ks);
    auto t = detail::make_table(X, PotentialMethod::PartialSum, sigma2);
    for (long long x = -X; x <= X; ++x) {
        if (x == 0) continue;
        std::vector<double> corrected;
        for (std::size_t j = 0; j < ks.size(); ++j)
            corrected.push_back(run.sums[j][static_cast<std::size_t>(x + X)] +
                                detail::gaussian_tail(ls, sigma2, ks[j], x));
        const auto [v, e] = detail::extrapolate(ks, corrected);
        t.a_values[static_cast<std::size_t>(x + X)] = v;
        t.error_estimate[static_cast<std::size_t>(x + X)] = e + run.trimmed;
    }
    detail::finish_table(t);
    return t;
}

/// Partial sum at a single x with its tail estimate and extrapolated limit.
inline PartialSumResult a_partial_sums(const StepLaw& law, long long x, long long K) {
    require(K >= 1, ErrorCode::InvalidArgument, "a_partial_sums needs K >= 1");
    PartialSumResult r;
    if (x == 0) return r;
    const long long ax = std::llabs(x);
    const auto ls = lattice_structure(law);
    const double sigma2 = static_cast<double>(moments(law).sigma2);
    std::vector<long long> ks = K >= 64 ? detail::partial_sum_checkpoints(K, ls.period)
                                        : std::vector<long long>{K};
    ks.front() = K;
    const auto run = detail::partial_sum_run(law, ax, ks);
    const std::size_t idx = static_cast<std::size_t>(x + ax);
    r.value = run.sums.front()[idx];
    r.remainder = detail::gaussian_tail(ls, sigma2, K, x);
    if (ks.size() >= 4) {
        std::vector<double> corrected;
        for (std::size_t j = 0; j < ks.size(); ++j)
            corrected.push_back(run.sums[j][idx] + detail::gaussian_tail(ls, sigma2, ks[j], x));
        const auto [v, e] = detail::extrapolate(ks, corrected);
        r.extrapolated = v;
        r.error = e;
    } else {
        r.extrapolated = r.value + r.remainder;
        r.error = std::fabs(r.remainder);
    }
    return r;
}

// ---------------------------------------------------------------------------

/// g_{0}(x, y) = a(x) + a(-y) - a(x - y).
inline double green_point(const PotentialTable& t, long long x, long long y) {
    require(x != 0 && y != 0, ErrorCode::InvalidArgument, "green_point needs x, y != 0");
    return t.a(x) + t.a(-y) - t.a(x - y);
}

/// max over |x| <= X - zmax of |sum_z p(z) a(x+z) - a(x) - 1(x=0)|.
inline double harmonicity_residual(const StepLaw& law, const PotentialTable& t) {
    const int zmax = std::max(std::abs(law.support_min), std::abs(law.support_max));
    double worst = 0.0;
    for (long long x = -t.X + zmax; x <= t.X - zmax; ++x) {
        numerics::CompensatedSum s;
        for (int z = law.support_min; z <= law.support_max; ++z)
            if (law.p(z) != 0.0) s.add(law.p(z) * t.a(x + z));
        s.add(-t.a(x) - (x == 0 ? 1.0 : 0.0));
        worst = std::max(worst, std::fabs(s.value()));
    }
    return worst;
}

struct EstimatedValue {
    double value = 0.0;
    double error = 0.0;
    std::string method;
};

struct WalkConstants {
    EstimatedValue C_plus;            ///< windowed limit of sigma^2 a(x) - x
    EstimatedValue C_plus_entrance;   ///< sum H_inf^+(y) (sigma^2 a(y) + |y|)
    EstimatedValue C_minus;
    EstimatedValue C_minus_entrance;
    EstimatedValue C_star;            ///< cosine-shift quadrature
    EstimatedValue C_star_alt;        ///< 2/l^2-shift quadrature
    double lambda3 = 0.0;
};

namespace detail {

/// Intercept of sigma^2 a(s x) - x against 1/x over x in [2X/3, X].
inline EstimatedValue windowed_limit(const PotentialTable& t, int s) {
    std::vector<double> inv, y;
    double table_err = 0.0;
    for (long long x = (2 * t.X) / 3; x <= t.X; ++x) {
        if (x == 0) continue;
        inv.push_back(1.0 / static_cast<double>(x));
        y.push_back(t.sigma2 * t.a(s * x) - static_cast<double>(x));
        table_err = std::max(table_err, t.sigma2 * t.error(s * x));
    }
    const auto fit = numerics::linear_fit(inv, y);
    double resid = 0.0;
    for (std::size_t i = 0; i < inv.size(); ++i)
        resid = std::max(resid, std::fabs(y[i] - fit.intercept - fit.slope * inv[i]));
    return {fit.intercept, resid + table_err + std::fabs(fit.slope) / static_cast<double>(t.X),
            "windowed fit against 1/x"};
}

inline EstimatedValue entrance_sum(const PotentialTable& t, const EntranceLaw& e, int s) {
    numerics::CompensatedSum v;
    double err = 0.0;
    for (long long y = e.pmf.lo(); y <= e.pmf.hi(); ++y) {
        if (y == 0) continue;
        const double h = e.at(y);
        if (h == 0.0) continue;
        v.add(h * (t.sigma2 * t.a(y) + static_cast<double>(std::llabs(y))));
        err += h * t.sigma2 * t.error(y);
    }
    (void)s;
    return {v.value(), err + 1e-12, "entrance-law sum"};
}

}  // namespace detail

/// lambda_3, C*, C^+ and C^- with two routes each for C^+ and C^-.
inline WalkConstants constants(const StepLaw& law, const PotentialTable& t, const HarmonicPair& hp,
                               const EntranceLaws* entrance = nullptr) {
    require(2 * t.X + 1 >= 200, ErrorCode::InvalidArgument,
            "constants need a potential window of at least 200 sites");
    WalkConstants c;
    c.lambda3 = static_cast<double>(moments(law).lambda3);
    const FourierKernel K(law);
    const auto cs = c_star_quadrature(K, true);
    const auto cs2 = c_star_quadrature(K, false);
    c.C_star = {cs.value, cs.error, "quadrature, 1/(1-cos l) shift"};
    c.C_star_alt = {cs2.value, cs2.error, "quadrature, 2/l^2 shift"};
    c.C_plus = detail::windowed_limit(t, +1);
    c.C_minus = detail::windowed_limit(t, -1);
    const EntranceLaws local = entrance ? EntranceLaws{} : entrance_laws(law, hp);
    const EntranceLaws& en = entrance ? *entrance : local;
    c.C_plus_entrance = detail::entrance_sum(t, en.h_inf_plus, +1);
    c.C_minus_entrance = detail::entrance_sum(t, en.h_minus_inf, -1);
    auto check = [](const EstimatedValue& a, const EstimatedValue& b, const char* what) {
        const double allowed = 3.0 * (a.error + b.error) + 1e-8;
        require(std::fabs(a.value - b.value) <= allowed, ErrorCode::InconsistentEstimates,
                std::string(what) + " routes disagree: " + std::to_string(a.value) + " vs " +
                    std::to_string(b.value));
    };
    check(c.C_plus, c.C_plus_entrance, "C+");
    check(c.C_minus, c.C_minus_entrance, "C-");
    // One-sided continuity makes sigma^2 a(x) = |x| exactly on one side, so
    // the matching constant is zero. Both numerical routes must agree first.
    auto snap = [](EstimatedValue& v, const char* why) {
        require(std::fabs(v.value) <= 1e-8 + 3.0 * v.error, ErrorCode::InconsistentEstimates,
                std::string("expected a zero constant: ") + std::to_string(v.value));
        v = {0.0, 0.0, why};
    };
    if (law.left_continuous) {
        snap(c.C_plus, "exact: left continuous");
        snap(c.C_plus_entrance, "exact: left continuous");
    }
    if (law.right_continuous) {
        snap(c.C_minus, "exact: right continuous");
        snap(c.C_minus_entrance, "exact: right continuous");
    }
    return c;
}

struct IdentityRow {
    long long x = 0;
    double overshoot_residual = 0.0;   ///< sum_{z<0} H_x^+(z)|z| - (f_+(x) - x)
    double potential_residual = 0.0;   ///< sum_{z<0} H_x^+(z)(sigma^2 a(z) - z) - (sigma^2 a(x) - x)
    double f_excess = 0.0;             ///< f_+(x) - x
    double a_excess = 0.0;             ///< sigma^2 a(x) - x
    double excess_ratio = 0.0;         ///< f_excess / a_excess, NaN when a_excess = 0
};

struct IdentityReport {
    std::vector<IdentityRow> rows;
    EstimatedValue C_plus_entrance;
    [[nodiscard]] double worst_potential_residual() const {
        double w = 0.0;
        for (const auto& r : rows) w = std::max(w, std::fabs(r.potential_residual));
        return w;
    }
    [[nodiscard]] double worst_overshoot_residual() const {
        double w = 0.0;
        for (const auto& r : rows) w = std::max(w, std::fabs(r.overshoot_residual));
        return w;
    }
};

/// Both sides of the entrance-law identities at each x of the H_x^+ list.
inline IdentityReport potential_identities(const PotentialTable& t, const HarmonicPair& hp,
                                           const EntranceLaws& en) {
    IdentityReport rep;
    for (const auto& e : en.h_x_plus) {
        IdentityRow r;
        r.x = e.x;
        numerics::CompensatedSum over, pot;
        for (long long z = e.pmf.lo(); z <= std::min<long long>(-1, e.pmf.hi()); ++z) {
            const double h = e.at(z);
            if (h == 0.0) continue;
            over.add(h * static_cast<double>(-z));
            pot.add(h * (t.sigma2 * t.a(z) - static_cast<double>(z)));
        }
        const double xd = static_cast<double>(e.x);
        r.f_excess = hp.fp(e.x) - xd;
        r.a_excess = t.sigma2 * t.a(e.x) - xd;
        r.overshoot_residual = over.value() - r.f_excess;
        r.potential_residual = pot.value() - r.a_excess;
        r.excess_ratio = r.a_excess != 0.0 ? r.f_excess / r.a_excess : std::nan("");
        rep.rows.push_back(r);
    }
    rep.C_plus_entrance = detail::entrance_sum(t, en.h_inf_plus, +1);
    return rep;
}

struct ExpansionRow {
    long long x = 0;
    double residual = 0.0;  ///< sigma^2 a(x) - |x| - C* + sign(x) lambda_3
};

inline std::vector<ExpansionRow> expansion_check(const PotentialTable& t, const WalkConstants& c) {
    std::vector<ExpansionRow> rows;
    for (long long x = -t.X; x <= t.X; ++x) {
        if (x == 0) continue;
        const double sgn = x > 0 ? 1.0 : -1.0;
        rows.push_back({x, t.sigma2 * t.a(x) - static_cast<double>(std::llabs(x)) -
                               c.C_star.value + sgn * c.lambda3});
    }
    return rows;
}

}  // namespace rwlab
