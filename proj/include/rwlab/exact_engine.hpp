#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "rwlab/error.hpp"
#include "rwlab/lattice_distribution.hpp"
#include "rwlab/numerics/summation.hpp"
#include "rwlab/walk_model.hpp"

namespace rwlab {

/// Maximum number of sites a single window may hold.
inline constexpr std::size_t kDefaultWindowBudget = std::size_t{1} << 25;

enum class KillMode { Free, Point, HalfLine, Partial };

inline const char* to_string(KillMode m) {
    switch (m) {
    case KillMode::Free: return "free";
    case KillMode::Point: return "point";
    case KillMode::HalfLine: return "halfline";
    case KillMode::Partial: return "partial";
    }
    return "?";
}

/// One-step evolution of a (possibly killed) walk on a dense window.
///
/// Point mode removes the mass landing on 0, partial mode removes the
/// fraction alpha of it, half-line mode removes everything landing on y <= 0
/// and keeps the removed profile of the last step.
class Evolver {
public:
    Evolver(const StepLaw& law, KillMode mode, double alpha = 1.0,
            std::size_t window_budget = kDefaultWindowBudget)
        : law_(&law), mode_(mode), alpha_(alpha), budget_(window_budget) {
        require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::InvalidArgument,
                "absorption probability must lie in [0, 1]");
        if (mode == KillMode::Point) alpha_ = 1.0;
    }

    void reset(long long x) { reset(LatticeDistribution::point_mass(x)); }

    void reset(LatticeDistribution initial) {
        state_ = std::move(initial);
        if (mode_ == KillMode::HalfLine)
            require(state_.lo() >= 1, ErrorCode::InvalidArgument,
                    "half-line walk must start on sites >= 1");
        steps_ = 0;
        last_absorbed_ = 0.0;
        trimmed_ = 0.0;
        exit_profile_ = {};
    }

    /// Edge weights below this threshold are dropped after every step.
    void set_trim_threshold(double t) { trim_ = t; }

    void step() {
        const std::size_t span = static_cast<std::size_t>(law_->span());
        const std::size_t n_in = state_.weights.size();
        const std::size_t n_out = n_in + span;
        require(n_out <= budget_, ErrorCode::WindowOverflow,
                "window of " + std::to_string(n_out) + " sites exceeds budget");
        next_.assign(n_out, 0.0);
        comp_.assign(n_out, 0.0);
        const double* in = state_.weights.data();
        for (std::size_t k = 0; k <= span; ++k) {
            const double w = law_->probs[k];
            if (w == 0.0) continue;
            double* out = next_.data() + k;
            double* c = comp_.data() + k;
            for (std::size_t i = 0; i < n_in; ++i) {
                const double y = w * in[i];
                const double s = out[i];
                const double t = s + y;
                c[i] += (std::fabs(s) >= std::fabs(y)) ? (s - t) + y : (y - t) + s;
                out[i] = t;
            }
        }
        for (std::size_t i = 0; i < n_out; ++i) next_[i] += comp_[i];
        state_.offset += law_->support_min;
        state_.weights.swap(next_);
        ++steps_;
        absorb();
        if (trim_ > 0.0) trim();
    }

    [[nodiscard]] const LatticeDistribution& state() const noexcept { return state_; }
    [[nodiscard]] long long steps() const noexcept { return steps_; }
    /// Mass removed by absorption in the last step.
    [[nodiscard]] double last_absorbed() const noexcept { return last_absorbed_; }
    /// Half-line mode: the removed sub-zero profile of the last step.
    [[nodiscard]] const LatticeDistribution& exit_profile() const noexcept { return exit_profile_; }
    /// Total mass discarded by trimming.
    [[nodiscard]] double trimmed_mass() const noexcept { return trimmed_; }
    [[nodiscard]] KillMode mode() const noexcept { return mode_; }

private:
    void absorb() {
        last_absorbed_ = 0.0;
        auto& w = state_.weights;
        switch (mode_) {
        case KillMode::Free: return;
        case KillMode::Point:
        case KillMode::Partial: {
            const long long idx = -state_.offset;
            if (idx >= 0 && idx < static_cast<long long>(w.size())) {
                const double m = w[static_cast<std::size_t>(idx)];
                last_absorbed_ = alpha_ * m;
                w[static_cast<std::size_t>(idx)] = (alpha_ == 1.0) ? 0.0 : (1.0 - alpha_) * m;
            }
            return;
        }
        case KillMode::HalfLine: {
            exit_profile_.offset = state_.offset;
            exit_profile_.weights.clear();
            const long long cut = std::min<long long>(1 - state_.offset,
                                                      static_cast<long long>(w.size()));
            if (cut <= 0) return;
            exit_profile_.weights.assign(w.begin(), w.begin() + cut);
            last_absorbed_ = numerics::compensated_total(exit_profile_.weights);
            w.erase(w.begin(), w.begin() + cut);
            state_.offset += cut;
            return;
        }
        }
    }

    void trim() {
        auto& w = state_.weights;
        std::size_t b = 0;
        while (b < w.size() && w[b] < trim_) trimmed_ += w[b++];
        std::size_t e = w.size();
        while (e > b && w[e - 1] < trim_) trimmed_ += w[--e];
        if (b == 0 && e == w.size()) return;
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(e), w.end());
        w.erase(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(b));
        state_.offset += static_cast<long long>(b);
    }

    const StepLaw* law_;
    KillMode mode_;
    double alpha_;
    std::size_t budget_;
    double trim_ = 0.0;
    LatticeDistribution state_;
    LatticeDistribution exit_profile_;
    std::vector<double> next_, comp_;
    long long steps_ = 0;
    double last_absorbed_ = 0.0;
    double trimmed_ = 0.0;
};

struct AbsorbedKernelSlice {
    KillMode mode = KillMode::Point;
    double alpha = 1.0;
    long long x = 0;
    long long n = 0;
    LatticeDistribution distribution;
    std::vector<double> absorbed_mass_by_step;  ///< index k-1 holds step k

    /// Surviving mass plus everything absorbed so far.
    [[nodiscard]] double total_mass() const {
        numerics::CompensatedSum s;
        s.add(distribution.mass());
        for (double v : absorbed_mass_by_step) s.add(v);
        return s.value();
    }
};

/// First-passage data. Point mode fills f; half-line mode fills h and
/// passage_time (P_x[T = k]).
struct FirstPassageSeries {
    long long x = 0;
    std::vector<double> f;             ///< f[k-1] = P_x[tau_0 = k]
    std::vector<double> passage_time;  ///< passage_time[k-1] = P_x[T = k]
    std::vector<LatticeDistribution> h;  ///< h[k-1] = h_x(k, .), sites <= 0
    double survival = 0.0;             ///< P_x[T > n] in half-line mode

    /// h_x(k, y)
    [[nodiscard]] double h_at(long long k, long long y) const {
        if (k < 1 || k > static_cast<long long>(h.size())) return 0.0;
        return h[static_cast<std::size_t>(k - 1)].at(y);
    }

    /// sum_{k <= n} h_x(k, y), the truncated entrance law.
    [[nodiscard]] double entrance_partial(long long y) const {
        numerics::CompensatedSum s;
        for (const auto& d : h) s.add(d.at(y));
        return s.value();
    }
};

struct PointAbsorbed {
    AbsorbedKernelSlice slice;
    FirstPassageSeries passage;
    std::map<long long, LatticeDistribution> snapshots;
};

namespace detail {

inline AbsorbedKernelSlice run_slice(const StepLaw& law, KillMode mode, double alpha,
                                     LatticeDistribution init, long long n, long long x,
                                     const std::function<void(const Evolver&)>& on_step = {}) {
    require(n >= 0, ErrorCode::InvalidArgument, "step count must be nonnegative");
    Evolver ev(law, mode, alpha);
    ev.reset(std::move(init));
    AbsorbedKernelSlice out;
    out.mode = mode;
    out.alpha = alpha;
    out.x = x;
    out.n = n;
    out.absorbed_mass_by_step.reserve(static_cast<std::size_t>(n));
    for (long long k = 1; k <= n; ++k) {
        ev.step();
        out.absorbed_mass_by_step.push_back(ev.last_absorbed());
        if (on_step) on_step(ev);
    }
    out.distribution = ev.state();
    return out;
}

inline void keep_snapshot(std::map<long long, LatticeDistribution>& snaps,
                          const std::vector<long long>& wanted, const Evolver& ev) {
    if (std::find(wanted.begin(), wanted.end(), ev.steps()) != wanted.end())
        snaps[ev.steps()] = ev.state();
}

}  // namespace detail

/// p^n(. - x).
inline LatticeDistribution evolve_free(const StepLaw& law, long long x, long long n) {
    return detail::run_slice(law, KillMode::Free, 0.0, LatticeDistribution::point_mass(x), n, x)
        .distribution;
}

/// q^k(x, .) with killing at the origin; f_x^{0}(k) is the mass landing on 0.
inline PointAbsorbed absorbed_at_origin(const StepLaw& law, long long x, long long n,
                                        const std::vector<long long>& snapshot_steps = {}) {
    require(n >= 1, ErrorCode::InvalidArgument, "absorbed_at_origin needs n >= 1");
    PointAbsorbed out;
    out.slice = detail::run_slice(
        law, KillMode::Point, 1.0, LatticeDistribution::point_mass(x), n, x,
        [&](const Evolver& ev) { detail::keep_snapshot(out.snapshots, snapshot_steps, ev); });
    out.passage.x = x;
    out.passage.f = out.slice.absorbed_mass_by_step;
    return out;
}

struct HalfLineAbsorbed {
    AbsorbedKernelSlice slice;
    std::map<long long, LatticeDistribution> snapshots;
};

/// q^k_{(-inf,0]}(x, .).
inline HalfLineAbsorbed absorbed_on_halfline(const StepLaw& law, long long x, long long n,
                                             const std::vector<long long>& snapshot_steps = {}) {
    require(x >= 1 && n >= 1, ErrorCode::InvalidArgument,
            "absorbed_on_halfline needs x >= 1 and n >= 1");
    HalfLineAbsorbed out;
    out.slice = detail::run_slice(
        law, KillMode::HalfLine, 1.0, LatticeDistribution::point_mass(x), n, x,
        [&](const Evolver& ev) { detail::keep_snapshot(out.snapshots, snapshot_steps, ev); });
    return out;
}

/// h_x(k, y) for k <= n together with P_x[T = k] and P_x[T > n].
inline FirstPassageSeries entrance_law(const StepLaw& law, long long x, long long n) {
    require(x >= 1 && n >= 1, ErrorCode::InvalidArgument, "entrance_law needs x >= 1, n >= 1");
    FirstPassageSeries fp;
    fp.x = x;
    auto slice = detail::run_slice(law, KillMode::HalfLine, 1.0,
                                   LatticeDistribution::point_mass(x), n, x,
                                   [&](const Evolver& ev) { fp.h.push_back(ev.exit_profile()); });
    fp.passage_time = slice.absorbed_mass_by_step;
    fp.survival = slice.distribution.mass();
    return fp;
}

struct PartialAbsorbed {
    AbsorbedKernelSlice slice;         ///< q_alpha^n(x, .)
    LatticeDistribution r_alpha;       ///< q_alpha^n - q^n
};

inline LatticeDistribution difference(const LatticeDistribution& a, const LatticeDistribution& b) {
    LatticeDistribution d;
    if (a.empty() && b.empty()) return d;
    const long long lo = std::min(a.empty() ? b.lo() : a.lo(), b.empty() ? a.lo() : b.lo());
    const long long hi = std::max(a.empty() ? b.hi() : a.hi(), b.empty() ? a.hi() : b.hi());
    d.offset = lo;
    d.weights.resize(static_cast<std::size_t>(hi - lo + 1));
    for (long long y = lo; y <= hi; ++y)
        d.weights[static_cast<std::size_t>(y - lo)] = a.at(y) - b.at(y);
    return d;
}

inline PartialAbsorbed partial_absorption(const StepLaw& law, double alpha, long long x,
                                          long long n) {
    PartialAbsorbed out;
    out.slice = detail::run_slice(law, KillMode::Partial, alpha,
                                  LatticeDistribution::point_mass(x), n, x);
    const auto full = detail::run_slice(law, KillMode::Point, 1.0,
                                        LatticeDistribution::point_mass(x), n, x);
    out.r_alpha = difference(out.slice.distribution, full.distribution);
    return out;
}

struct NegativeMass {
    double value = 0.0;               ///< Q_x^+(n)
    std::vector<double> by_step;      ///< by_step[k-1] = Q_x^+(k)
};

/// Q_x^+(k) = sum_{y<0} q^k(x, y) for k <= n.
inline NegativeMass negative_mass(const StepLaw& law, long long x, long long n) {
    NegativeMass out;
    detail::run_slice(law, KillMode::Point, 1.0, LatticeDistribution::point_mass(x), n, x,
                      [&](const Evolver& ev) {
                          out.by_step.push_back(ev.state().mass_between(ev.state().lo(), -1));
                      });
    out.value = out.by_step.empty() ? (x < 0 ? 1.0 : 0.0) : out.by_step.back();
    return out;
}

struct NuResult {
    long long n = 0;
    long long x_max = 0;
    double ell = 0.0;
    double nu = 0.0;                  ///< sum_{x <= x_max} Q_x^+(n)
    double tail_bound = 0.0;          ///< bound on sum_{x > x_max} Q_x^+(n)
    double expected_particles = 0.0;  ///< E[N_n(ell)] for the unit initial density
};

/// Upper bound on sum_{x > x_max} P_0[S_n < -x] from Hoeffding's inequality
/// for increments confined to an interval of length R.
inline double hoeffding_tail_sum(long long n, long long x_max, int range) {
    const double R = static_cast<double>(range);
    const double nn = static_cast<double>(n);
    const double k = std::sqrt(2.0 / (nn * R * R));
    return std::sqrt(M_PI) / (2.0 * k) * std::erfc(k * static_cast<double>(x_max));
}

/// nu_n and the mean particle count, from a single run started from the unit
/// density on 1..x_max.
inline NuResult nu_and_particles(const StepLaw& law, long long n, long long x_max, double ell,
                                 double tol = 1e-6) {
    require(n >= 1 && x_max >= 1 && ell >= 0.0, ErrorCode::InvalidArgument,
            "nu_and_particles needs n >= 1, x_max >= 1, ell >= 0");
    LatticeDistribution init;
    init.offset = 1;
    init.weights.assign(static_cast<std::size_t>(x_max), 1.0);
    const auto slice = detail::run_slice(law, KillMode::Point, 1.0, std::move(init), n, 0);
    const double sigma2 = static_cast<double>(moments(law).sigma2);
    NuResult r;
    r.n = n;
    r.x_max = x_max;
    r.ell = ell;
    const auto& d = slice.distribution;
    r.nu = d.mass_between(d.lo(), -1);
    const long long lo = -static_cast<long long>(std::floor(ell * std::sqrt(sigma2 * n)));
    r.expected_particles = d.mass_between(lo, -1);
    r.tail_bound = hoeffding_tail_sum(n, x_max, law.span());
    require(r.tail_bound <= tol, ErrorCode::TailNotNegligible,
            "tail bound " + std::to_string(r.tail_bound) + " exceeds " + std::to_string(tol));
    return r;
}

inline long long default_x_max(const StepLaw& law, long long n, double multiple = 8.0) {
    const double sigma2 = static_cast<double>(moments(law).sigma2);
    return static_cast<long long>(std::ceil(multiple * std::sqrt(sigma2 * n)));
}

/// Value of an exit probability on a truncated window, with the bracket
/// obtained by counting escapes as failure (lower) or success (upper).
struct Bracketed {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

struct StripExit {
    double p_up_before_T = 0.0;         ///< P_x[tau_[N,inf) < T]
    double mean_overshoot = 0.0;        ///< E_x[S_tau - N | tau_[N,inf) < T]
    Bracketed p_hit_N_before_0;         ///< P_x[tau_N < tau_0]
    Bracketed p_up_before_0;            ///< P_x[tau_[N,inf) < tau_0]
    long long window = 0;
};

namespace detail {

/// Solves (I - P_S) h = b for several right-hand sides on the state list S.
/// `classify(t)` returns the state index of site t or -1 when t is absorbing;
/// `boundary(t, col)` gives the payoff collected on absorption at t.
template <class Classify, class Boundary>
Eigen::MatrixXd solve_exit(const StepLaw& law, const std::vector<long long>& states,
                           Classify&& classify, Boundary&& boundary, int ncols) {
    const auto n = static_cast<Eigen::Index>(states.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(states.size() * (law.span() + 2));
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, ncols);
    for (Eigen::Index i = 0; i < n; ++i) {
        trip.emplace_back(i, i, 1.0);
        for (int z = law.support_min; z <= law.support_max; ++z) {
            const double w = law.p(z);
            if (w == 0.0) continue;
            const long long t = states[static_cast<std::size_t>(i)] + z;
            const long long j = classify(t);
            if (j >= 0)
                trip.emplace_back(i, static_cast<Eigen::Index>(j), -w);
            else
                for (int c = 0; c < ncols; ++c) rhs(i, c) += w * boundary(t, c);
        }
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    require(lu.info() == Eigen::Success, ErrorCode::SingularSystem, "strip system is singular");
    Eigen::MatrixXd sol = lu.solve(rhs);
    require(lu.info() == Eigen::Success, ErrorCode::SingularSystem, "strip solve failed");
    return sol;
}

}  // namespace detail

/// Exit problems from the strip (0, N).
///
/// The half-line variant lives on the finite state set 1..N-1 and is exact.
/// The point variants allow excursions below 0; they are solved on a window
/// reaching `window` sites beyond each side and reported as brackets.
inline StripExit strip_exit(const StepLaw& law, long long x, long long N, long long window = 0) {
    require(0 < x && x < N, ErrorCode::InvalidArgument, "strip_exit needs 0 < x < N");
    if (window <= 0) window = 16 * N;
    StripExit out;
    out.window = window;
    {
        std::vector<long long> states;
        for (long long s = 1; s < N; ++s) states.push_back(s);
        auto sol = detail::solve_exit(
            law, states, [&](long long t) { return (t >= 1 && t < N) ? t - 1 : -1; },
            [&](long long t, int c) {
                if (t < N) return 0.0;
                return c == 0 ? 1.0 : static_cast<double>(t - N);
            },
            2);
        out.p_up_before_T = sol(x - 1, 0);
        out.mean_overshoot = out.p_up_before_T > 0 ? sol(x - 1, 1) / out.p_up_before_T : 0.0;
    }
    const long long lo = -window;
    // Escapes from the window are scored 0 (lower), 1 (upper), or mapped onto
    // the nearest window edge; the last closure uses that the exit
    // probability is asymptotically flat far from the strip.
    auto bracketed = [&](long long hi, auto&& is_target, auto&& is_killed) {
        std::vector<long long> states;
        std::vector<long long> index(static_cast<std::size_t>(hi - lo + 1), -1);
        for (long long s = lo; s <= hi; ++s)
            if (!is_target(s) && !is_killed(s)) {
                index[static_cast<std::size_t>(s - lo)] = static_cast<long long>(states.size());
                states.push_back(s);
            }
        auto inside = [&](long long t) -> long long {
            if (t < lo || t > hi) return -1;
            return index[static_cast<std::size_t>(t - lo)];
        };
        auto payoff = [&](long long t, int c) {
            if (is_target(t)) return 1.0;
            if (is_killed(t)) return 0.0;
            return c == 0 ? 0.0 : 1.0;
        };
        auto br = detail::solve_exit(law, states, inside, payoff, 2);
        auto clamp = [&](long long t) -> long long {
            if (is_target(t) || is_killed(t)) return -1;
            return inside(std::clamp(t, lo, hi));
        };
        auto cl = detail::solve_exit(law, states, clamp,
                                     [&](long long t, int) { return is_target(t) ? 1.0 : 0.0; }, 1);
        const auto i = static_cast<Eigen::Index>(inside(x));
        return Bracketed{cl(i, 0), br(i, 0), br(i, 1)};
    };
    out.p_hit_N_before_0 = bracketed(
        N + window, [&](long long t) { return t == N; }, [](long long t) { return t == 0; });
    out.p_up_before_0 = bracketed(
        N - 1, [&](long long t) { return t >= N; }, [](long long t) { return t == 0; });
    return out;
}

/// Exact rational evolution for small n, used to calibrate the float engine.
inline std::map<long long, Rational> evolve_rational(const StepLaw& law, KillMode mode,
                                                     long long x, long long n,
                                                     const Rational& alpha = Rational(1)) {
    require(n <= 64, ErrorCode::InvalidArgument, "rational evolution is limited to n <= 64");
    if (mode == KillMode::HalfLine)
        require(x >= 1, ErrorCode::InvalidArgument, "half-line walk must start at x >= 1");
    std::map<long long, Rational> cur{{x, Rational(1)}};
    for (long long k = 0; k < n; ++k) {
        std::map<long long, Rational> next;
        for (const auto& [s, w] : cur)
            for (int z = law.support_min; z <= law.support_max; ++z) {
                const Rational pz = law.p_exact(z);
                if (pz == 0) continue;
                next[s + z] += w * pz;
            }
        if (mode == KillMode::Point) next.erase(0);
        if (mode == KillMode::Partial) {
            auto it = next.find(0);
            if (it != next.end()) it->second *= (1 - alpha);
        }
        if (mode == KillMode::HalfLine)
            for (auto it = next.begin(); it != next.end() && it->first <= 0;) it = next.erase(it);
        cur.swap(next);
    }
    return cur;
}

/// Rows (mode, x, n, y, value) in ascending y.
inline void write_slice_csv(std::ostream& os, const std::string& mode, long long x, long long n,
                            const LatticeDistribution& d, bool header = true) {
    if (header) os << "mode,x,n,y,value\n";
    char buf[64];
    for (long long y = d.lo(); y <= d.hi(); ++y) {
        std::snprintf(buf, sizeof buf, "%.17g", d.at(y));
        os << mode << ',' << x << ',' << n << ',' << y << ',' << buf << '\n';
    }
}

}  // namespace rwlab
