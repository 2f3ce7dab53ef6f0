#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "rwlab/error.hpp"
#include "rwlab/exact_engine.hpp"
#include "rwlab/numerics/summation.hpp"
#include "rwlab/walk_model.hpp"

namespace rwlab {

enum class LadderDirection { Ascending, Descending };

enum class LadderMethod {
    StripClosure,  ///< finite strip solve plus stationary-overshoot closure
    KilledWalkDP,  ///< time-stepped killed walk with proportional renormalization
};

/// Strict ladder height law. `pmf[h-1]` is the probability of height h.
struct LadderHeightLaw {
    LadderDirection direction = LadderDirection::Ascending;
    LadderMethod method = LadderMethod::StripClosure;
    std::vector<double> pmf;
    double mean = 0.0;
    double deficit_estimate = 0.0;
    /// Largest change in the renormalized shape between the last two
    /// resolution levels.
    double shape_stability = 0.0;

    [[nodiscard]] int max_height() const noexcept { return static_cast<int>(pmf.size()); }
    [[nodiscard]] double at(int h) const noexcept {
        return (h >= 1 && h <= max_height()) ? pmf[static_cast<std::size_t>(h - 1)] : 0.0;
    }
};

namespace detail {

inline double pmf_mean(const std::vector<double>& pmf) {
    numerics::CompensatedSum s;
    for (std::size_t j = 0; j < pmf.size(); ++j) s.add(static_cast<double>(j + 1) * pmf[j]);
    return s.value();
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
        const double x = i < a.size() ? a[i] : 0.0;
        const double y = i < b.size() ? b[i] : 0.0;
        m = std::max(m, std::fabs(x - y));
    }
    return m;
}

/// Ascending ladder law of `law` from the strip (-L, 0].
///
/// Paths that fall to or below -L before entering [1, inf) are completed with
/// the stationary overshoot law pi_j = P[H >= j] / E[H], which is what a walk
/// started far below the level sees. The result is the fixed point of
/// H = H_L + eps_L * pi(H).
inline std::vector<double> ascending_ladder_strip(const StepLaw& law, long long depth) {
    const int up = law.support_max;
    const auto n = static_cast<Eigen::Index>(depth);
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, up + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const long long s = static_cast<long long>(i) - depth + 1;
        trip.emplace_back(i, i, 1.0);
        for (int z = law.support_min; z <= law.support_max; ++z) {
            const double w = law.p(z);
            if (w == 0.0) continue;
            const long long t = s + z;
            if (t >= 1)
                rhs(i, static_cast<Eigen::Index>(t - 1)) += w;
            else if (t <= -depth)
                rhs(i, up) += w;
            else
                trip.emplace_back(i, static_cast<Eigen::Index>(t + depth - 1), -w);
        }
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    require(lu.info() == Eigen::Success, ErrorCode::SingularSystem, "ladder strip is singular");
    const Eigen::MatrixXd sol = lu.solve(rhs);
    std::vector<double> hl(static_cast<std::size_t>(up));
    for (int j = 0; j < up; ++j) hl[static_cast<std::size_t>(j)] = sol(n - 1, j);
    const double eps = sol(n - 1, up);

    std::vector<double> h = hl;
    const double tot = numerics::compensated_total(h);
    for (auto& v : h) v /= tot;
    for (int it = 0; it < 200; ++it) {
        const double mu = pmf_mean(h);
        std::vector<double> next(h.size());
        double tail = 1.0;
        for (std::size_t j = 0; j < h.size(); ++j) {
            next[j] = hl[j] + eps * tail / mu;
            tail -= h[j];
        }
        const double change = max_abs_diff(next, h);
        h.swap(next);
        if (change < 1e-17) break;
    }
    return h;
}

/// Ascending ladder law by stepping the walk killed on [1, inf) for n steps
/// and renormalizing the captured mass. Returns the raw captured pmf.
inline std::vector<double> ascending_ladder_dp(const StepLaw& law, long long n_steps) {
    // S confined to (-inf, 0] from 0 is 1 - R with R the reflected walk on
    // [1, inf) started at 1; R leaving to r <= 0 is S entering at 1 - r.
    const StepLaw refl = reflected(law);
    Evolver ev(refl, KillMode::HalfLine);
    ev.reset(1);
    std::vector<double> cap(static_cast<std::size_t>(law.support_max), 0.0);
    std::vector<numerics::CompensatedSum> acc(cap.size());
    for (long long k = 0; k < n_steps; ++k) {
        ev.step();
        const auto& prof = ev.exit_profile();
        for (long long r = prof.lo(); r <= prof.hi(); ++r) {
            const long long h = 1 - r;
            if (h >= 1 && h <= static_cast<long long>(cap.size()))
                acc[static_cast<std::size_t>(h - 1)].add(prof.at(r));
        }
        if (ev.state().empty()) break;
    }
    for (std::size_t j = 0; j < cap.size(); ++j) cap[j] = acc[j].value();
    return cap;
}

}  // namespace detail

/// Strict ladder height law in the requested direction. The descending law
/// is the ascending law of the reflected walk.
///
/// `resolution` is the strip depth for the closure method and the number of
/// steps for the DP method; 0 picks a default.
inline LadderHeightLaw ladder_height_law(const StepLaw& law, LadderDirection direction,
                                         long long resolution = 0, double tol = 1e-10,
                                         LadderMethod method = LadderMethod::StripClosure) {
    const StepLaw base = direction == LadderDirection::Ascending ? law : reflected(law);
    LadderHeightLaw out;
    out.direction = direction;
    out.method = method;
    if (method == LadderMethod::StripClosure) {
        const long long depth = resolution > 0 ? resolution : std::max<long long>(200, 50LL * law.span());
        const auto h1 = detail::ascending_ladder_strip(base, depth);
        const auto h2 = detail::ascending_ladder_strip(base, 2 * depth);
        out.pmf = h2;
        out.shape_stability = detail::max_abs_diff(h1, h2);
        out.deficit_estimate =
            std::max(out.shape_stability, std::fabs(1.0 - numerics::compensated_total(h2)));
    } else {
        const long long n = resolution > 0 ? resolution : 1 << 14;
        const auto raw_half = detail::ascending_ladder_dp(base, n / 2);
        const auto raw = detail::ascending_ladder_dp(base, n);
        const double got = numerics::compensated_total(raw);
        const double got_half = numerics::compensated_total(raw_half);
        out.pmf = raw;
        for (auto& v : out.pmf) v /= got;
        auto shape_half = raw_half;
        for (auto& v : shape_half) v /= got_half;
        out.shape_stability = detail::max_abs_diff(out.pmf, shape_half);
        out.deficit_estimate = 1.0 - got;
    }
    out.mean = detail::pmf_mean(out.pmf);
    require(out.deficit_estimate <= tol, ErrorCode::DeficitTooLarge,
            "ladder deficit " + std::to_string(out.deficit_estimate) + " exceeds tolerance " +
                std::to_string(tol));
    return out;
}

/// f_+ and f_- on 1..X with their increments. Index 0 holds f(0) = 0 and
/// u(0) = 0.
struct HarmonicPair {
    LadderHeightLaw ascending;
    LadderHeightLaw descending;
    long long X = 0;
    std::vector<double> f_plus, f_minus, u_plus, u_minus;

    [[nodiscard]] double fp(long long x) const { return lookup(f_plus, x, "f_+"); }
    [[nodiscard]] double fm(long long x) const { return lookup(f_minus, x, "f_-"); }
    [[nodiscard]] double up(long long x) const { return lookup(u_plus, x, "u^+"); }
    [[nodiscard]] double um(long long x) const { return lookup(u_minus, x, "u^-"); }

    /// The pair of the reflected law: the roles of f_+ and f_- swap.
    [[nodiscard]] HarmonicPair swapped() const {
        HarmonicPair r;
        r.ascending = descending;
        r.descending = ascending;
        r.X = X;
        r.f_plus = f_minus;
        r.f_minus = f_plus;
        r.u_plus = u_minus;
        r.u_minus = u_plus;
        return r;
    }

private:
    static double lookup(const std::vector<double>& t, long long x, const char* what) {
        require(x >= 0 && x < static_cast<long long>(t.size()), ErrorCode::OutOfWindow,
                std::string(what) + " requested outside its table at " + std::to_string(x));
        return t[static_cast<std::size_t>(x)];
    }
};

namespace detail {

/// f(x) = E[H] * sum_{k<x} u(k) with u the renewal sequence of H.
inline std::vector<double> renewal_harmonic(const LadderHeightLaw& h, long long X) {
    std::vector<double> u(static_cast<std::size_t>(X + 1), 0.0);
    u[0] = 1.0;
    for (long long k = 1; k <= X; ++k) {
        numerics::CompensatedSum s;
        for (int j = 1; j <= std::min<long long>(k, h.max_height()); ++j)
            s.add(h.at(j) * u[static_cast<std::size_t>(k - j)]);
        u[static_cast<std::size_t>(k)] = s.value();
    }
    std::vector<double> f(static_cast<std::size_t>(X + 1), 0.0);
    numerics::CompensatedSum run;
    for (long long x = 1; x <= X; ++x) {
        run.add(u[static_cast<std::size_t>(x - 1)]);
        f[static_cast<std::size_t>(x)] = h.mean * run.value();
    }
    return f;
}

inline std::vector<double> increments(const std::vector<double>& f) {
    std::vector<double> u(f.size(), 0.0);
    for (std::size_t y = 1; y < f.size(); ++y) u[y] = f[y] - f[y - 1];
    return u;
}

}  // namespace detail

inline constexpr long long kDefaultHarmonicWindow = 400;

/// f_- is driven by the ascending ladder, f_+ by the descending one.
inline HarmonicPair harmonic_pair(const LadderHeightLaw& asc, const LadderHeightLaw& desc,
                                  long long X = kDefaultHarmonicWindow) {
    require(asc.direction == LadderDirection::Ascending &&
                desc.direction == LadderDirection::Descending,
            ErrorCode::InvalidArgument, "harmonic_pair expects (ascending, descending)");
    require(X >= 1, ErrorCode::InvalidArgument, "harmonic window must be positive");
    HarmonicPair hp;
    hp.ascending = asc;
    hp.descending = desc;
    hp.X = X;
    hp.f_minus = detail::renewal_harmonic(asc, X);
    hp.f_plus = detail::renewal_harmonic(desc, X);
    hp.u_minus = detail::increments(hp.f_minus);
    hp.u_plus = detail::increments(hp.f_plus);
    return hp;
}

inline HarmonicPair harmonic_pair(const StepLaw& law, long long X = kDefaultHarmonicWindow) {
    return harmonic_pair(ladder_height_law(law, LadderDirection::Ascending),
                         ladder_height_law(law, LadderDirection::Descending), X);
}

/// g_{(-inf,0]}(x, y) from the increments of f_+ and f_-.
inline double green_halfline(const HarmonicPair& hp, double sigma2, long long x, long long y) {
    require(x >= 1 && y >= 1 && x <= hp.X && y <= hp.X, ErrorCode::OutOfWindow,
            "green_halfline needs 1 <= x, y <= " + std::to_string(hp.X));
    numerics::CompensatedSum s;
    for (long long z = 0; z <= std::min(x, y); ++z) s.add(hp.up(x - z) * hp.um(y - z));
    return 2.0 / sigma2 * s.value();
}

enum class EntranceKind { HxPlus, HInfPlus, HMinusInf };

/// Hitting law of a half line, stored as a window of sites.
struct EntranceLaw {
    EntranceKind kind = EntranceKind::HInfPlus;
    long long x = 0;  ///< start for HxPlus
    LatticeDistribution pmf;

    [[nodiscard]] double at(long long y) const { return pmf.at(y); }
    [[nodiscard]] double total() const { return pmf.mass(); }
};

struct EntranceLaws {
    EntranceLaw h_inf_plus;
    EntranceLaw h_minus_inf;
    std::vector<EntranceLaw> h_x_plus;

    [[nodiscard]] const EntranceLaw& hx(long long x) const {
        for (const auto& e : h_x_plus)
            if (e.x == x) return e;
        fail(ErrorCode::OutOfWindow, "H_x^+ not built for x = " + std::to_string(x));
    }
};

inline long long default_entrance_depth(const StepLaw& law) {
    return 4LL * std::max(0, -law.support_min) + 50;
}

namespace detail {

/// (2/sigma^2) sum_{j>=1} f(j) p(y - j) on y in [-depth, 0].
inline LatticeDistribution entrance_from_infinity(const StepLaw& law,
                                                  const std::vector<double>& f, double sigma2,
                                                  long long depth) {
    LatticeDistribution d;
    d.offset = -depth;
    d.weights.assign(static_cast<std::size_t>(depth + 1), 0.0);
    const long long fmax = static_cast<long long>(f.size()) - 1;
    for (long long y = -depth; y <= 0; ++y) {
        numerics::CompensatedSum s;
        for (long long j = 1; j <= y - law.support_min; ++j) {
            require(j <= fmax, ErrorCode::OutOfWindow, "harmonic table too short for entrance law");
            s.add(f[static_cast<std::size_t>(j)] * law.p(static_cast<int>(y - j)));
        }
        d.weights[static_cast<std::size_t>(y + depth)] = 2.0 / sigma2 * s.value();
    }
    return d;
}

}  // namespace detail

/// H_inf^+, its dual H_{-inf}^- and H_x^+ for each requested x.
inline EntranceLaws entrance_laws(const StepLaw& law, const HarmonicPair& hp,
                                  const std::vector<long long>& xs = {}, long long depth = 0) {
    if (depth <= 0) depth = default_entrance_depth(law);
    const double sigma2 = static_cast<double>(moments(law).sigma2);
    EntranceLaws out;
    out.h_inf_plus.kind = EntranceKind::HInfPlus;
    out.h_inf_plus.pmf = detail::entrance_from_infinity(law, hp.f_minus, sigma2, depth);

    // Same construction on the reflected law, read back with y -> -y.
    const StepLaw refl = reflected(law);
    const auto dual = detail::entrance_from_infinity(refl, hp.f_plus, sigma2, depth);
    out.h_minus_inf.kind = EntranceKind::HMinusInf;
    out.h_minus_inf.pmf.offset = 0;
    out.h_minus_inf.pmf.weights.assign(dual.weights.rbegin(), dual.weights.rend());

    for (long long x : xs) {
        require(x >= 1, ErrorCode::InvalidArgument, "H_x^+ needs x >= 1");
        EntranceLaw e;
        e.kind = EntranceKind::HxPlus;
        e.x = x;
        e.pmf.offset = -depth;
        e.pmf.weights.assign(static_cast<std::size_t>(depth + 1), 0.0);
        for (long long y = -depth; y <= 0; ++y) {
            numerics::CompensatedSum s;
            for (long long w = 1; w <= y - law.support_min; ++w)
                s.add(green_halfline(hp, sigma2, x, w) * law.p(static_cast<int>(y - w)));
            e.pmf.weights[static_cast<std::size_t>(y + depth)] = s.value();
        }
        out.h_x_plus.push_back(std::move(e));
    }
    return out;
}

/// Largest |E[f(x + s Y); x + s Y > 0] - f(x)| over x in [1, x_hi], with s = +1
/// for f_+ and s = -1 for f_-.
inline double harmonicity_residual(const StepLaw& law, const std::vector<double>& f, int sign,
                                   long long x_hi) {
    double worst = 0.0;
    const long long fmax = static_cast<long long>(f.size()) - 1;
    for (long long x = 1; x <= x_hi; ++x) {
        numerics::CompensatedSum s;
        for (int z = law.support_min; z <= law.support_max; ++z) {
            const long long t = x + sign * z;
            if (t <= 0 || law.p(z) == 0.0) continue;
            require(t <= fmax, ErrorCode::OutOfWindow, "harmonicity check leaves the table");
            s.add(law.p(z) * f[static_cast<std::size_t>(t)]);
        }
        worst = std::max(worst, std::fabs(s.value() - f[static_cast<std::size_t>(x)]));
    }
    return worst;
}

/// sum_j f_-(j) P[Y <= -j]; equals sigma^2 / 2.
inline double ladder_mean_sum(const StepLaw& law, const HarmonicPair& hp) {
    numerics::CompensatedSum s;
    for (long long j = 1; j <= -law.support_min; ++j) s.add(hp.fm(j) * law.cdf(static_cast<int>(-j)));
    return s.value();
}

}  // namespace rwlab
