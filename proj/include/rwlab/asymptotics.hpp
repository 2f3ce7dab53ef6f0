#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

#include "rwlab/error.hpp"
#include "rwlab/ladder_theory.hpp"
#include "rwlab/numerics/quadrature.hpp"
#include "rwlab/potential_theory.hpp"
#include "rwlab/walk_model.hpp"

namespace rwlab {

/// Gaussian surrogate g_n(u) of p^n(u) with variance sigma^2 n.
struct GaussKernel {
    double sigma2 = 1.0;

    [[nodiscard]] double n_star(double n) const noexcept { return sigma2 * n; }
    [[nodiscard]] double operator()(double n, double u) const noexcept {
        const double v = sigma2 * n;
        return std::exp(-u * u / (2.0 * v)) / std::sqrt(2.0 * M_PI * v);
    }
};

/// Brownian passage-time density Phi_xi(t) = |xi| e^{-xi^2/2t} / (sqrt(2 pi) t^{3/2}).
struct PassageDensity {
    [[nodiscard]] double operator()(double xi, double t) const noexcept {
        if (t <= 0.0) return 0.0;
        const double e = xi * xi / (2.0 * t);
        if (e > 700.0) return 0.0;
        const double a = std::fabs(xi);
        return a * std::exp(-e) / (std::sqrt(2.0 * M_PI) * std::pow(t, 1.5));
    }
};

inline double kernel_g(double sigma2, double n, double u) { return GaussKernel{sigma2}(n, u); }
inline double kernel_phi(double xi, double t) { return PassageDensity{}(xi, t); }

/// int_0^inf Phi_xi(t) dt by quadrature (equals 1). The piece over t > 1 is
/// mapped to (0, 1] by t = 1/v^2.
inline double passage_normalization(double xi) {
    PassageDensity phi;
    const auto head = numerics::integrate_tanh_sinh([&](double t) { return phi(xi, t); }, 0.0, 1.0,
                                                     1e-15);
    const auto tail = numerics::integrate_tanh_sinh(
        [&](double v) {
            // Phi_xi(1/v^2) * 2/v^3 with the powers of v cancelled
            return 2.0 * std::fabs(xi) * std::exp(-0.5 * xi * xi * v * v) / std::sqrt(2.0 * M_PI);
        },
        0.0, 1.0, 1e-15);
    return head.value + tail.value;
}

/// int_0^1 Phi_xi(t) Phi_eta(1 - t) dt by quadrature (equals Phi_{|xi|+|eta|}(1)).
inline double passage_convolution(double xi, double eta) {
    PassageDensity phi;
    auto r = numerics::integrate_tanh_sinh(
        [&](double t) { return phi(xi, t) * phi(eta, 1.0 - t); }, 0.0, 1.0, 1e-15);
    return r.value;
}

enum class TheoremId {
    T11i,
    T11ii,
    T11iii_bound,
    T12_refined,
    T13,
    T14,
    C11,
    P12_Qplus,
    T15_nu,
    C12_particles,
    P61_ralpha,
    ThmA_passage,
    IVbound,
    EQ14bound,
};

inline constexpr TheoremId kAllTheorems[] = {
    TheoremId::T11i,        TheoremId::T11ii,     TheoremId::T11iii_bound, TheoremId::T12_refined,
    TheoremId::T13,         TheoremId::T14,       TheoremId::C11,          TheoremId::P12_Qplus,
    TheoremId::T15_nu,      TheoremId::C12_particles, TheoremId::P61_ralpha, TheoremId::ThmA_passage,
    TheoremId::IVbound,     TheoremId::EQ14bound,
};

inline std::string_view to_string(TheoremId id) {
    switch (id) {
    case TheoremId::T11i: return "T11i";
    case TheoremId::T11ii: return "T11ii";
    case TheoremId::T11iii_bound: return "T11iii_bound";
    case TheoremId::T12_refined: return "T12_refined";
    case TheoremId::T13: return "T13";
    case TheoremId::T14: return "T14";
    case TheoremId::C11: return "C11";
    case TheoremId::P12_Qplus: return "P12_Qplus";
    case TheoremId::T15_nu: return "T15_nu";
    case TheoremId::C12_particles: return "C12_particles";
    case TheoremId::P61_ralpha: return "P61_ralpha";
    case TheoremId::ThmA_passage: return "ThmA_passage";
    case TheoremId::IVbound: return "IVbound";
    case TheoremId::EQ14bound: return "EQ14bound";
    }
    return "?";
}

inline TheoremId theorem_from_string(std::string_view s) {
    for (TheoremId id : kAllTheorems)
        if (to_string(id) == s) return id;
    fail(ErrorCode::InvalidArgument, "unknown theorem id '" + std::string(s) + "'");
}

/// Precomputed objects the evaluators draw on. Absent members raise
/// MissingKernel when a formula needs them.
struct Kernels {
    const StepLaw* law = nullptr;
    double sigma2 = 0.0;
    LatticeStructure lattice;
    const PotentialTable* potential = nullptr;
    const HarmonicPair* harmonic = nullptr;
    const EntranceLaw* h_inf_plus = nullptr;
    const WalkConstants* constants = nullptr;
};

inline Kernels make_kernels(const StepLaw& law, const PotentialTable* a = nullptr,
                            const HarmonicPair* hp = nullptr, const EntranceLaw* hinf = nullptr,
                            const WalkConstants* c = nullptr) {
    Kernels k;
    k.law = &law;
    k.sigma2 = static_cast<double>(moments(law).sigma2);
    k.lattice = lattice_structure(law);
    k.potential = a;
    k.harmonic = hp;
    k.h_inf_plus = hinf;
    k.constants = c;
    return k;
}

struct RhsExtras {
    /// Exact p^n(y - x); when absent the Gaussian surrogate
    /// d_o 1(reachable) g_n(y - x) is used.
    std::optional<double> pn;
    double alpha = 0.5;          ///< partial absorption probability
    double ell = 1.0;            ///< particle window for C12
    long long k = 0;             ///< step index for the passage law
    bool use_pn_form = false;    ///< P61: choose the p^n(y-x) form
};

namespace detail {

template <class T>
const T& need(const T* p, const char* what) {
    if (!p) fail(ErrorCode::MissingKernel, std::string("formula needs ") + what);
    return *p;
}

}  // namespace detail

/// Leading term or envelope shape of the chosen estimate at (x, y, n).
inline double rhs(TheoremId id, const Kernels& K, long long x, long long y, long long n,
                  const RhsExtras& ex = {}) {
    const double nd = static_cast<double>(n);
    const double ns = K.sigma2 * nd;
    const double xd = static_cast<double>(x), yd = static_cast<double>(y);
    const GaussKernel g{K.sigma2};
    const double d = K.lattice.period;
    auto reach = [&](long long m, long long disp) { return reachable(K.lattice, m, disp) ? 1.0 : 0.0; };
    auto pn = [&]() {
        if (ex.pn) return *ex.pn;
        return d * reach(n, y - x) * g(nd, yd - xd);
    };
    auto a_tab = [&]() -> const PotentialTable& { return detail::need(K.potential, "potential table"); };
    auto hp = [&]() -> const HarmonicPair& { return detail::need(K.harmonic, "harmonic pair"); };
    auto cst = [&]() -> const WalkConstants& { return detail::need(K.constants, "walk constants"); };

    switch (id) {
    case TheoremId::T11i: {
        const auto& a = a_tab();
        return (K.sigma2 * K.sigma2 * a.a_star(x) * a.a(-y) + xd * yd) / ns * pn();
    }
    case TheoremId::T11ii:
        if (xd * yd < 0) return 0.0;
        return d * reach(n, y - x) * (g(nd, yd - xd) - g(nd, yd + xd));
    case TheoremId::T11iii_bound: {
        const double lo = std::min(std::fabs(xd), std::fabs(yd));
        const double hi = std::max(std::fabs(xd), std::fabs(yd));
        return lo / hi * g(4.0 * nd, hi);
    }
    case TheoremId::T12_refined:
        return d * reach(n, y - x) * cst().C_plus.value * kernel_phi(xd + std::fabs(yd), ns);
    case TheoremId::T13:
        return 2.0 * hp().fp(x) * hp().fm(y) / ns * pn();
    case TheoremId::T14: {
        const auto& h = detail::need(K.h_inf_plus, "H_inf^+");
        // h_x(n, y) needs the walk to reach y at time n.
        return d * reach(n, y - x) * hp().fp(x) * g(nd, xd) / nd * h.at(y);
    }
    case TheoremId::C11:
        return hp().fp(x) * g(nd, xd) / nd;
    case TheoremId::P12_Qplus:
        if (x >= 0) return (K.sigma2 * a_tab().a_star(x) - xd) / std::sqrt(2.0 * M_PI * ns);
        return std::erf(std::fabs(xd) / std::sqrt(2.0 * ns));
    case TheoremId::T15_nu:
        return 0.5 * cst().C_plus.value;
    case TheoremId::C12_particles:
        return 0.5 * cst().C_plus.value * std::erf(ex.ell / std::sqrt(2.0));
    case TheoremId::P61_ralpha: {
        const auto& a = a_tab();
        const double gamma = (1.0 - ex.alpha) / ex.alpha;
        const double pref = gamma * K.sigma2 * (a.a_star(x) + a.a_star(-y)) / nd;
        if (ex.use_pn_form) return pref * pn();
        return pref * d * reach(n, y - x) * g(nd, std::fabs(xd) + std::fabs(yd));
    }
    case TheoremId::ThmA_passage: {
        const double k = static_cast<double>(ex.k > 0 ? ex.k : n);
        const double s = std::sqrt(K.sigma2);
        return s * a_tab().a_star(x) * std::exp(-xd * xd / (2.0 * K.sigma2 * k)) /
               (std::sqrt(2.0 * M_PI) * std::pow(k, 1.5));
    }
    case TheoremId::IVbound:
        return (std::fabs(xd) + 1.0) * std::fabs(yd) / std::pow(nd, 1.5);
    case TheoremId::EQ14bound: {
        const auto& h = detail::need(K.h_inf_plus, "H_inf^+");
        return h.at(y) / (xd * std::sqrt(nd));
    }
    }
    fail(ErrorCode::InvalidArgument, "unhandled theorem id");
}

}  // namespace rwlab
