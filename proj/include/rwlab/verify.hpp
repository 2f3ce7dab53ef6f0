#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "rwlab/asymptotics.hpp"
#include "rwlab/defaults.hpp"
#include "rwlab/error.hpp"
#include "rwlab/exact_engine.hpp"
#include "rwlab/ladder_theory.hpp"
#include "rwlab/numerics/fit.hpp"
#include "rwlab/potential_theory.hpp"
#include "rwlab/walk_model.hpp"

namespace rwlab {

// ---------------------------------------------------------------------------
// Law context: every kernel a comparison may need, built once.

struct ContextOptions {
    long long potential_window = defaults().potential_window;
    long long harmonic_window = defaults().harmonic_window;
    std::vector<long long> hx_starts = {};
};

struct LawContext {
    StepLaw law;
    Moments mom;
    LatticeStructure lattice;
    double sigma2 = 0.0;
    PotentialTable potential;
    HarmonicPair harmonic;
    EntranceLaws entrance;
    WalkConstants constants;

    [[nodiscard]] Kernels kernels() const {
        return make_kernels(law, &potential, &harmonic, &entrance.h_inf_plus, &constants);
    }
};

inline LawContext build_context(const StepLaw& law, const ContextOptions& opt = {}) {
    LawContext c;
    c.law = law;
    c.mom = moments(law);
    c.lattice = lattice_structure(law);
    c.sigma2 = c.mom.sigma2_d();
    c.potential = a_fourier_table(law, opt.potential_window);
    c.harmonic = harmonic_pair(law, opt.harmonic_window);
    c.entrance = entrance_laws(law, c.harmonic, opt.hx_starts);
    c.constants = constants(law, c.potential, c.harmonic, &c.entrance);
    return c;
}

// ---------------------------------------------------------------------------
// Memoized exact values

class ExactOracle {
public:
    explicit ExactOracle(const StepLaw& law) : law_(law) {}

    [[nodiscard]] const StepLaw& law() const noexcept { return law_; }

    /// q^n(x, y), point absorption.
    double q(long long x, long long y, long long n) { return point(x, n).slice.distribution.at(y); }
    const PointAbsorbed& point(long long x, long long n) {
        auto key = std::make_pair(x, n);
        auto it = point_.find(key);
        if (it == point_.end()) it = point_.emplace(key, absorbed_at_origin(law_, x, n)).first;
        return it->second;
    }
    /// q^n_{(-inf,0]}(x, y).
    double q_half(long long x, long long y, long long n) {
        auto key = std::make_pair(x, n);
        auto it = half_.find(key);
        if (it == half_.end())
            it = half_.emplace(key, absorbed_on_halfline(law_, x, n).slice.distribution).first;
        return it->second.at(y);
    }
    /// p^n(d).
    double p(long long n, long long d) {
        auto it = free_.find(n);
        if (it == free_.end()) it = free_.emplace(n, evolve_free(law_, 0, n)).first;
        return it->second.at(d);
    }
    const FirstPassageSeries& entrance(long long x, long long n) {
        auto key = std::make_pair(x, n);
        auto it = entrance_.find(key);
        if (it == entrance_.end()) it = entrance_.emplace(key, entrance_law(law_, x, n)).first;
        return it->second;
    }
    /// h_x(n, y)
    double h(long long x, long long n, long long y) { return entrance(x, n).h_at(n, y); }
    /// P_x[T = n]
    double passage(long long x, long long n) {
        return entrance(x, n).passage_time[static_cast<std::size_t>(n - 1)];
    }
    /// P_x[tau_0 = n]
    double first_return(long long x, long long n) {
        return point(x, n).passage.f[static_cast<std::size_t>(n - 1)];
    }
    /// Q_x^+(n)
    double negative_mass(long long x, long long n) {
        const auto& d = point(x, n).slice.distribution;
        return d.mass_between(d.lo(), -1);
    }
    /// r_alpha^n(x, y) = q_alpha^n(x, y) - q^n(x, y)
    double r_alpha(double alpha, long long x, long long y, long long n) {
        auto key = std::make_tuple(alpha, x, n);
        auto it = partial_.find(key);
        if (it == partial_.end())
            it = partial_
                     .emplace(key, detail::run_slice(law_, KillMode::Partial, alpha,
                                                     LatticeDistribution::point_mass(x), n, x)
                                       .distribution)
                     .first;
        return it->second.at(y) - q(x, y, n);
    }
    const NuResult& nu(long long n, double ell, double multiple, double tol) {
        auto key = std::make_tuple(n, ell, multiple);
        auto it = nu_.find(key);
        if (it == nu_.end())
            it = nu_.emplace(key, nu_and_particles(law_, n, default_x_max(law_, n, multiple), ell, tol))
                     .first;
        return it->second;
    }

    /// Computes the DP runs the cells of one theorem need, up to `workers`
    /// at a time, and stores them in key order.
    struct Need {
        long long x, n;
    };
    void prefetch(TheoremId id, const std::vector<Need>& cells, double alpha, int workers) {
        if (workers <= 1) return;
        auto run = [&](auto& cache, auto key_of, auto compute) {
            using Key = decltype(key_of(Need{}));
            std::vector<Key> keys;
            for (const auto& c : cells) {
                Key k = key_of(c);
                if (!cache.count(k) && std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
            }
            for (std::size_t i = 0; i < keys.size(); i += static_cast<std::size_t>(workers)) {
                const std::size_t end = std::min(keys.size(), i + static_cast<std::size_t>(workers));
                std::vector<std::future<typename std::decay_t<decltype(cache)>::mapped_type>> fut;
                for (std::size_t j = i; j < end; ++j)
                    fut.push_back(std::async(std::launch::async, compute, keys[j]));
                for (std::size_t j = i; j < end; ++j) cache.emplace(keys[j], fut[j - i].get());
            }
        };
        auto xn = [](const Need& c) { return std::make_pair(c.x, c.n); };
        const StepLaw& L = law_;
        auto point_run = [&](std::pair<long long, long long> k) { return absorbed_at_origin(L, k.first, k.second); };
        auto free_run = [&](long long n) { return evolve_free(L, 0, n); };
        run(free_, [](const Need& c) { return c.n; }, free_run);
        switch (id) {
        case TheoremId::T13:
            run(half_, xn, [&](std::pair<long long, long long> k) {
                return absorbed_on_halfline(L, k.first, k.second).slice.distribution;
            });
            break;
        case TheoremId::T14:
        case TheoremId::EQ14bound:
        case TheoremId::C11:
            run(entrance_, xn, [&](std::pair<long long, long long> k) { return entrance_law(L, k.first, k.second); });
            break;
        case TheoremId::P61_ralpha:
            run(partial_, [&](const Need& c) { return std::make_tuple(alpha, c.x, c.n); },
                [&](std::tuple<double, long long, long long> k) {
                    return detail::run_slice(L, KillMode::Partial, std::get<0>(k),
                                             LatticeDistribution::point_mass(std::get<1>(k)), std::get<2>(k),
                                             std::get<1>(k))
                        .distribution;
                });
            run(point_, xn, point_run);
            break;
        case TheoremId::T15_nu:
        case TheoremId::C12_particles: break;
        default: run(point_, xn, point_run); break;
        }
    }

private:
    StepLaw law_;
    std::map<std::pair<long long, long long>, PointAbsorbed> point_;
    std::map<std::pair<long long, long long>, LatticeDistribution> half_;
    std::map<long long, LatticeDistribution> free_;
    std::map<std::pair<long long, long long>, FirstPassageSeries> entrance_;
    std::map<std::tuple<double, long long, long long>, LatticeDistribution> partial_;
    std::map<std::tuple<long long, double, double>, NuResult> nu_;
};

// ---------------------------------------------------------------------------
// Grids and reports

struct GridSpec {
    TheoremId theorem = TheoremId::T11i;
    std::string law_name;
    std::vector<double> xi = {0.2};
    std::vector<double> eta = {0.2};
    /// When nonempty, y takes these fixed values instead of eta * sqrt(n_*).
    std::vector<long long> fixed_y;
    std::vector<long long> n = defaults().n_ladder;
    double a_circ = defaults().a_circ;
    double alpha = defaults().alpha;
    double ell = defaults().particle_ell;
    bool exact_pn = true;       ///< feed the exact p^n(y - x) into the formulas
    bool pn_form = false;       ///< P61: p^n(y - x) form instead of the g_n form
    double tolerance = defaults().trend_tol;
};

struct Cell {
    long long n = 0, x = 0, y = 0;
    double xi = 0.0, eta = 0.0;
    double exact = 0.0;
    double rhs = 0.0;
    double rel_err = 0.0;    ///< |exact - rhs| / max(|exact|, 1e-16)
    double ratio_err = 0.0;  ///< |exact / rhs - 1|
    bool excluded = false;
    std::string note;
};

/// One scaled coordinate followed along the n ladder.
struct Trend {
    double xi = 0.0, eta = 0.0;
    long long fixed_y = 0;
    bool has_fixed_y = false;
    std::vector<long long> n;
    std::vector<double> err;  ///< ratio errors along n
    double slope = 0.0;       ///< d log(err) / d log(n)
    bool decreasing = false;
    double final_err = 0.0;

    [[nodiscard]] std::string label() const {
        char buf[96];
        if (has_fixed_y)
            std::snprintf(buf, sizeof buf, "xi=%g,y=%lld", xi, fixed_y);
        else
            std::snprintf(buf, sizeof buf, "xi=%g,eta=%g", xi, eta);
        return buf;
    }
};

struct ComparisonReport {
    TheoremId theorem = TheoremId::T11i;
    std::string law;
    double tolerance = 0.0;
    std::vector<Cell> cells;
    std::vector<Trend> trends;
    std::vector<std::string> notes;

    [[nodiscard]] bool all_decreasing() const {
        return std::all_of(trends.begin(), trends.end(), [](const Trend& t) { return t.decreasing; });
    }
    [[nodiscard]] bool final_within(double tol) const {
        return std::all_of(trends.begin(), trends.end(),
                           [&](const Trend& t) { return t.final_err < tol; });
    }
    [[nodiscard]] bool passed() const { return all_decreasing() && final_within(tolerance); }
};

inline constexpr double kRelErrFloor = 1e-16;

inline double relative_error(double exact, double rhs) {
    return std::fabs(exact - rhs) / std::max(std::fabs(exact), kRelErrFloor);
}

inline double ratio_error(double exact, double rhs) {
    if (rhs == 0.0) return exact == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::fabs(exact / rhs - 1.0);
}

/// Throws ConstraintViolation when (x, y, n) leaves the hypothesis region.
inline void check_region(TheoremId id, long long x, long long y, long long n, double a_circ) {
    const double rn = std::sqrt(static_cast<double>(n));
    const double ax = std::fabs(static_cast<double>(x)), ay = std::fabs(static_cast<double>(y));
    const double hi = std::max(ax, ay), lo = std::min(ax, ay);
    bool ok = true;
    switch (id) {
    case TheoremId::T11i:
    case TheoremId::P61_ralpha: ok = hi < a_circ * rn; break;
    case TheoremId::T11ii: ok = ax > rn / a_circ && ay > rn / a_circ && hi < a_circ * rn; break;
    case TheoremId::T11iii_bound: ok = lo > 0 && lo < rn && rn < hi; break;
    case TheoremId::T12_refined: ok = y < 0 && 0 < x && hi <= a_circ * rn; break;
    case TheoremId::T13: ok = x > 0 && y > 0 && hi <= a_circ * rn; break;
    case TheoremId::T14: ok = y <= 0 && x > 0 && ax <= a_circ * rn; break;
    case TheoremId::C11: ok = x >= 1; break;
    case TheoremId::EQ14bound: ok = x >= 1 && y <= 0; break;
    default: break;
    }
    if (!ok)
        fail(ErrorCode::ConstraintViolation,
             std::string(to_string(id)) + " cell (x=" + std::to_string(x) + ", y=" +
                 std::to_string(y) + ", n=" + std::to_string(n) + ") leaves its region");
}

namespace detail {

inline long long scaled(double s, double sigma2, long long n) {
    return static_cast<long long>(std::llround(s * std::sqrt(sigma2 * static_cast<double>(n))));
}

inline bool uses_y(TheoremId id) {
    switch (id) {
    case TheoremId::C11:
    case TheoremId::P12_Qplus:
    case TheoremId::T15_nu:
    case TheoremId::C12_particles:
    case TheoremId::ThmA_passage: return false;
    default: return true;
    }
}

inline bool uses_x(TheoremId id) {
    return id != TheoremId::T15_nu && id != TheoremId::C12_particles;
}

/// Displacement that must be reachable for the cell to be nonzero, if any.
inline std::optional<long long> required_displacement(TheoremId id, long long x, long long y) {
    switch (id) {
    case TheoremId::T11i:
    case TheoremId::T11ii:
    case TheoremId::T11iii_bound:
    case TheoremId::T12_refined:
    case TheoremId::T13:
    case TheoremId::T14:
    case TheoremId::P61_ralpha: return y - x;
    case TheoremId::ThmA_passage: return -x;
    default: return std::nullopt;
    }
}

}  // namespace detail

/// Exact value of the quantity the estimate describes.
inline double exact_value(TheoremId id, ExactOracle& ex, const GridSpec& g, long long x,
                          long long y, long long n) {
    switch (id) {
    case TheoremId::T11i:
    case TheoremId::T11ii:
    case TheoremId::T11iii_bound:
    case TheoremId::T12_refined:
    case TheoremId::IVbound: return ex.q(x, y, n);
    case TheoremId::T13: return ex.q_half(x, y, n);
    case TheoremId::T14:
    case TheoremId::EQ14bound: return ex.h(x, n, y);
    case TheoremId::C11: return ex.passage(x, n);
    case TheoremId::P12_Qplus: return ex.negative_mass(x, n);
    case TheoremId::T15_nu:
        return ex.nu(n, g.ell, defaults().nu_x_max_multiple, defaults().nu_tail_tol).nu;
    case TheoremId::C12_particles:
        return ex.nu(n, g.ell, defaults().nu_x_max_multiple, defaults().nu_tail_tol).expected_particles;
    case TheoremId::P61_ralpha: return ex.r_alpha(g.alpha, x, y, n);
    case TheoremId::ThmA_passage: return ex.first_return(x, n);
    }
    fail(ErrorCode::InvalidArgument, "unhandled theorem id");
}

/// Runs the grid: exact values from the DP engine, right-hand sides from the
/// evaluators, errors and trends along n.
inline ComparisonReport compare_grid(const GridSpec& g, const LawContext& ctx, ExactOracle& ex,
                                     int workers = 1) {
    require(g.n.size() >= 1, ErrorCode::InvalidArgument, "grid needs at least one n");
    ComparisonReport rep;
    rep.theorem = g.theorem;
    rep.law = g.law_name.empty() ? ctx.law.name : g.law_name;
    rep.tolerance = g.tolerance;
    const Kernels K = ctx.kernels();
    const bool with_y = detail::uses_y(g.theorem);
    const bool with_x = detail::uses_x(g.theorem);
    const std::vector<double> xis = with_x ? g.xi : std::vector<double>{0.0};

    struct Coord {
        double xi, eta;
        std::optional<long long> fy;
    };
    std::vector<Coord> coords;
    for (double xi : xis) {
        if (!with_y)
            coords.push_back({xi, 0.0, std::nullopt});
        else if (!g.fixed_y.empty())
            for (long long fy : g.fixed_y) coords.push_back({xi, 0.0, fy});
        else
            for (double eta : g.eta) coords.push_back({xi, eta, std::nullopt});
    }

    std::vector<Trend> trends(coords.size());
    for (std::size_t c = 0; c < coords.size(); ++c) {
        trends[c].xi = coords[c].xi;
        trends[c].eta = coords[c].eta;
        trends[c].has_fixed_y = coords[c].fy.has_value();
        trends[c].fixed_y = coords[c].fy.value_or(0);
    }
    if (workers > 1) {
        std::vector<ExactOracle::Need> need;
        for (long long n : g.n)
            for (const auto& c : coords) {
                const long long x = with_x ? detail::scaled(c.xi, ctx.sigma2, n) : 0;
                const long long y = !with_y ? 0 : c.fy ? *c.fy : detail::scaled(c.eta, ctx.sigma2, n);
                check_region(g.theorem, x, y, n, g.a_circ);
                need.push_back({x, n});
            }
        ex.prefetch(g.theorem, need, g.alpha, workers);
    }
    for (long long n : g.n) {
        for (std::size_t c = 0; c < coords.size(); ++c) {
            Cell cell;
            cell.n = n;
            cell.xi = coords[c].xi;
            cell.eta = coords[c].eta;
            cell.x = with_x ? detail::scaled(coords[c].xi, ctx.sigma2, n) : 0;
            cell.y = !with_y ? 0 : coords[c].fy ? *coords[c].fy : detail::scaled(coords[c].eta, ctx.sigma2, n);
            check_region(g.theorem, cell.x, cell.y, n, g.a_circ);
            const auto disp = detail::required_displacement(g.theorem, cell.x, cell.y);
            if (disp && !reachable(ctx.lattice, n, *disp)) {
                cell.excluded = true;
                cell.note = "unreachable";
                rep.cells.push_back(cell);
                continue;
            }
            RhsExtras extras;
            extras.alpha = g.alpha;
            extras.ell = g.ell;
            extras.use_pn_form = g.pn_form;
            if (g.exact_pn) extras.pn = ex.p(n, cell.y - cell.x);
            cell.exact = exact_value(g.theorem, ex, g, cell.x, cell.y, n);
            cell.rhs = rhs(g.theorem, K, cell.x, cell.y, n, extras);
            if (cell.exact == 0.0 && cell.rhs == 0.0) {
                cell.excluded = true;
                cell.note = "degenerate: exact = rhs = 0";
            } else {
                cell.rel_err = relative_error(cell.exact, cell.rhs);
                cell.ratio_err = ratio_error(cell.exact, cell.rhs);
                trends[c].n.push_back(n);
                trends[c].err.push_back(cell.ratio_err);
            }
            rep.cells.push_back(cell);
        }
    }
    for (auto& t : trends) {
        if (t.err.empty()) {
            rep.notes.push_back(t.label() + ": all cells excluded");
            continue;
        }
        std::vector<double> nn(t.n.begin(), t.n.end());
        t.slope = t.err.size() >= 2 ? numerics::log_log_slope(nn, t.err) : std::nan("");
        t.decreasing = t.err.size() >= 2;
        for (std::size_t i = 1; i < t.err.size(); ++i)
            if (!(t.err[i] < t.err[i - 1])) t.decreasing = false;
        t.final_err = t.err.back();
        rep.trends.push_back(t);
    }
    return rep;
}

struct ConvergenceEntry {
    std::string theorem, law, label;
    double slope = 0.0;
    double final_err = 0.0;
    bool decreasing = false;
    bool nonnegative_slope = false;
};

struct ConvergenceSummary {
    std::vector<ConvergenceEntry> entries;
    std::vector<std::string> notes;

    [[nodiscard]] std::string text() const {
        std::ostringstream os;
        os << "theorem law coordinate slope final_err decreasing flag\n";
        for (const auto& e : entries) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "%s %s %s %.4f %.6g %s %s\n", e.theorem.c_str(),
                          e.law.c_str(), e.label.c_str(), e.slope, e.final_err,
                          e.decreasing ? "yes" : "no", e.nonnegative_slope ? "SLOPE>=0" : "-");
            os << buf;
        }
        for (const auto& n : notes) os << "note: " << n << '\n';
        return os.str();
    }
};

inline ConvergenceSummary convergence_report(const std::vector<ComparisonReport>& reports) {
    ConvergenceSummary s;
    for (const auto& r : reports) {
        std::set<long long> levels;
        for (const auto& c : r.cells) levels.insert(c.n);
        if (levels.size() < 2)
            s.notes.push_back(std::string(to_string(r.theorem)) + " on " + r.law +
                              ": fewer than two n levels");
        for (const auto& t : r.trends) {
            ConvergenceEntry e;
            e.theorem = std::string(to_string(r.theorem));
            e.law = r.law;
            e.label = t.label();
            e.slope = t.slope;
            e.final_err = t.final_err;
            e.decreasing = t.decreasing;
            e.nonnegative_slope = !(t.slope < 0.0);
            s.entries.push_back(e);
        }
        std::size_t excluded = 0;
        for (const auto& c : r.cells) excluded += c.excluded ? 1 : 0;
        if (excluded)
            s.notes.push_back(std::string(to_string(r.theorem)) + " on " + r.law + ": " +
                              std::to_string(excluded) + " cells excluded");
        for (const auto& n : r.notes) s.notes.push_back(n);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Invariant suite

struct InvariantResult {
    std::string name;
    bool passed = false;
    bool skipped = false;
    double worst = 0.0;
    double tolerance = 0.0;
    std::string detail;  ///< offending cell or skip reason
};

struct InvariantOptions {
    long long n_max = 4096;       ///< mass conservation horizon
    long long n_kernel = 1024;    ///< duality and Chapman-Kolmogorov horizon
    long long green_n = 256;      ///< Green partial sums at N and 4N
    long long strip_N = 40;
};

namespace detail {

inline InvariantResult make_result(std::string name, double worst, double tol, std::string where) {
    InvariantResult r;
    r.name = std::move(name);
    r.worst = worst;
    r.tolerance = tol;
    r.passed = worst < tol;
    r.detail = std::move(where);
    return r;
}

inline InvariantResult skipped(std::string name, std::string reason) {
    InvariantResult r;
    r.name = std::move(name);
    r.skipped = true;
    r.passed = true;
    r.detail = std::move(reason);
    return r;
}

struct Worst {
    double value = 0.0;
    std::string where;
    void update(double v, const std::string& w) {
        if (!(v <= value)) {
            value = v;
            where = w;
        }
    }
};

inline std::string cell_str(long long x, long long y, long long n) {
    return "x=" + std::to_string(x) + " y=" + std::to_string(y) + " n=" + std::to_string(n);
}

}  // namespace detail

/// Mass conservation in point and half-line mode at every step up to n_max.
inline InvariantResult check_mass_conservation(const StepLaw& law, long long n_max,
                                               const std::vector<long long>& starts, double tol) {
    detail::Worst w;
    for (long long x : starts)
        for (KillMode mode : {KillMode::Point, KillMode::HalfLine}) {
            if (mode == KillMode::HalfLine && x < 1) continue;
            Evolver ev(law, mode);
            ev.reset(x);
            numerics::CompensatedSum absorbed;
            for (long long k = 1; k <= n_max; ++k) {
                ev.step();
                absorbed.add(ev.last_absorbed());
                const double err = std::fabs(ev.state().mass() + absorbed.value() - 1.0);
                w.update(err, std::string(to_string(mode)) + " x=" + std::to_string(x) +
                                  " n=" + std::to_string(k));
            }
        }
    return detail::make_result("mass conservation", w.value, tol, w.where);
}

/// Time reversal: q^n(x, y) under p equals q^n(y, x) under p*.
inline InvariantResult check_duality(const StepLaw& law, long long n,
                                     const std::vector<long long>& xs,
                                     const std::vector<long long>& ys, double tol) {
    const StepLaw refl = reflected(law);
    detail::Worst w;
    for (long long x : xs) {
        const auto fwd = absorbed_at_origin(law, x, n).slice.distribution;
        const auto fwd_h = x >= 1 ? absorbed_on_halfline(law, x, n).slice.distribution
                                  : LatticeDistribution{};
        for (long long y : ys) {
            const auto back = absorbed_at_origin(refl, y, n).slice.distribution;
            w.update(std::fabs(fwd.at(y) - back.at(x)), "point " + detail::cell_str(x, y, n));
            if (x >= 1 && y >= 1) {
                const auto back_h = absorbed_on_halfline(refl, y, n).slice.distribution;
                w.update(std::fabs(fwd_h.at(y) - back_h.at(x)), "halfline " + detail::cell_str(x, y, n));
            }
        }
    }
    return detail::make_result("duality", w.value, tol, w.where);
}

/// q^{m+n}(x, y) = sum_z q^m(x, z) q^n(z, y), with q^n(., y) read off a
/// reflected run from y.
inline InvariantResult check_chapman_kolmogorov(const StepLaw& law, long long m, long long n,
                                                const std::vector<long long>& xs,
                                                const std::vector<long long>& ys, double tol) {
    const StepLaw refl = reflected(law);
    detail::Worst w;
    for (bool half : {false, true}) {
        for (long long x : xs) {
            if (half && x < 1) continue;
            auto first = half ? absorbed_on_halfline(law, x, m + n, {m}).snapshots
                              : absorbed_at_origin(law, x, m + n, {m}).snapshots;
            const auto full = half ? absorbed_on_halfline(law, x, m + n).slice.distribution
                                   : absorbed_at_origin(law, x, m + n).slice.distribution;
            const auto& qm = first.at(m);
            for (long long y : ys) {
                if (half && y < 1) continue;
                const auto qn = half ? absorbed_on_halfline(refl, y, n).slice.distribution
                                     : absorbed_at_origin(refl, y, n).slice.distribution;
                numerics::CompensatedSum s;
                for (long long z = qm.lo(); z <= qm.hi(); ++z) s.add(qm.at(z) * qn.at(z));
                w.update(std::fabs(full.at(y) - s.value()),
                         std::string(half ? "halfline " : "point ") + detail::cell_str(x, y, m + n));
            }
        }
    }
    return detail::make_result("Chapman-Kolmogorov", w.value, tol, w.where);
}

/// Off-lattice sites carry zero mass.
inline InvariantResult check_reachability(const StepLaw& law, long long n,
                                          const std::vector<long long>& xs) {
    const auto ls = lattice_structure(law);
    if (ls.period == 1) {
        auto r = detail::make_result("reachability", 0.0, 1e-300, "aperiodic: no forbidden sites");
        r.passed = true;
        return r;
    }
    detail::Worst w;
    for (long long x : xs) {
        const auto q = absorbed_at_origin(law, x, n).slice.distribution;
        const auto p = evolve_free(law, x, n);
        for (long long y = p.lo(); y <= p.hi(); ++y)
            if (!reachable(ls, n, y - x)) {
                w.update(std::fabs(p.at(y)), "free " + detail::cell_str(x, y, n));
                w.update(std::fabs(q.at(y)), "point " + detail::cell_str(x, y, n));
            }
    }
    auto r = detail::make_result("reachability", w.value, 1e-300, w.where);
    r.passed = w.value == 0.0;
    return r;
}

/// 0 <= q_half <= q <= p^n for x, y >= 1.
inline InvariantResult check_domination(const StepLaw& law, long long n,
                                        const std::vector<long long>& xs) {
    detail::Worst w;
    for (long long x : xs) {
        if (x < 1) continue;
        const auto h = absorbed_on_halfline(law, x, n).slice.distribution;
        const auto q = absorbed_at_origin(law, x, n).slice.distribution;
        const auto p = evolve_free(law, x, n);
        for (long long y = 1; y <= p.hi(); ++y) {
            w.update(std::max({-h.at(y), h.at(y) - q.at(y), q.at(y) - p.at(y)}),
                     detail::cell_str(x, y, n));
        }
    }
    return detail::make_result("domination chain", w.value, 1e-15, w.where);
}

/// Runs every invariant at its stated tolerance. Inapplicable checks are
/// reported as skipped with the reason.
inline std::vector<InvariantResult> invariant_suite(const LawContext& ctx,
                                                    const InvariantOptions& opt = {}) {
    const auto& law = ctx.law;
    const auto& D = defaults();
    std::vector<InvariantResult> out;
    const std::vector<long long> xs = {1, 3, -2};
    const std::vector<long long> ys = {1, 2, 5, -1, -4};

    out.push_back(check_mass_conservation(law, opt.n_max, xs, D.mass_tol));
    out.push_back(check_chapman_kolmogorov(law, opt.n_kernel / 2, opt.n_kernel / 2, xs, ys,
                                           D.identity_tol));
    out.push_back(check_duality(law, opt.n_kernel, xs, ys, D.duality_tol));
    out.push_back(check_reachability(law, opt.n_max, {1, 2}));
    out.push_back(check_domination(law, opt.n_kernel, {1, 4}));

    // one-sided continuity: the walk cannot cross the origin without landing on it
    if (law.left_continuous || law.right_continuous) {
        detail::Worst w;
        for (long long x : {1LL, 4LL}) {
            const auto h = absorbed_on_halfline(law, x, opt.n_kernel).slice.distribution;
            const auto q = absorbed_at_origin(law, x, opt.n_kernel).slice.distribution;
            for (long long y = 1; y <= q.hi(); ++y)
                w.update(std::fabs(h.at(y) - q.at(y)), detail::cell_str(x, y, opt.n_kernel));
        }
        out.push_back(detail::make_result("half-line equals point kernel on x, y > 0", w.value,
                                          D.identity_tol, w.where));
    } else {
        out.push_back(detail::skipped("half-line equals point kernel on x, y > 0",
                                      "law is neither left nor right continuous"));
    }

    // Reflection principle
    if (law.left_continuous && law.right_continuous && law.p(1) == law.p(-1)) {
        detail::Worst w;
        for (long long x : {1LL, 3LL}) {
            const auto q = absorbed_at_origin(law, x, opt.n_kernel).slice.distribution;
            const auto p = evolve_free(law, 0, opt.n_kernel);
            for (long long y = 1; y <= q.hi(); ++y)
                w.update(std::fabs(q.at(y) - (p.at(y - x) - p.at(y + x))),
                         detail::cell_str(x, y, opt.n_kernel));
        }
        out.push_back(detail::make_result("reflection principle", w.value, 1e-12, w.where));
    } else {
        out.push_back(detail::skipped("reflection principle", "law is not a symmetric nearest-neighbour walk"));
    }

    // Potential kernel
    {
        bool positive = ctx.potential.a(0) == 0.0;
        for (long long x = -ctx.potential.X; x <= ctx.potential.X; ++x)
            if (x != 0 && !(ctx.potential.a(x) > 0.0)) positive = false;
        auto r = detail::make_result("a(0) = 0 and a > 0 elsewhere", positive ? 0.0 : 1.0, 0.5, "");
        out.push_back(r);
        out.push_back(detail::make_result("harmonicity of a",
                                          harmonicity_residual(law, ctx.potential), D.harmonicity_tol, ""));
    }

    // Green functions: partial sums approach the formulas from below
    {
        const long long N = opt.green_n;
        detail::Worst below, shrink;
        bool monotone = true;
        for (auto [x, y] : std::vector<std::pair<long long, long long>>{{1, 1}, {3, 2}, {2, -1}}) {
            const double g = green_point(ctx.potential, x, y);
            auto gap = [&](long long M) {
                numerics::CompensatedSum s;
                s.add(x == y ? 1.0 : 0.0);
                Evolver ev(law, KillMode::Point);
                ev.reset(x);
                for (long long k = 1; k <= M; ++k) {
                    ev.step();
                    s.add(ev.state().at(y));
                }
                return g - s.value();
            };
            const double g1 = gap(N), g4 = gap(4 * N);
            below.update(std::max(-g1, -g4), detail::cell_str(x, y, 4 * N));
            if (g1 > 1e-12 && g4 > 1e-12) shrink.update(g4 / g1, detail::cell_str(x, y, N));
            if (g4 > g1) monotone = false;
        }
        auto r = detail::make_result("point Green function bounds its partial sums",
                                     std::max(below.value, monotone ? 0.0 : 1.0), 1e-9, below.where);
        out.push_back(r);
        auto s = detail::make_result("point Green gap shrinks by >= 1.5 from N to 4N", shrink.value,
                                     1.0 / 1.5, shrink.where);
        out.push_back(s);

        detail::Worst hb, hs;
        for (auto [x, y] : std::vector<std::pair<long long, long long>>{{1, 1}, {3, 2}, {5, 8}}) {
            const double g = green_halfline(ctx.harmonic, ctx.sigma2, x, y);
            auto gap = [&](long long M) {
                numerics::CompensatedSum s;
                s.add(x == y ? 1.0 : 0.0);
                Evolver ev(law, KillMode::HalfLine);
                ev.reset(x);
                for (long long k = 1; k <= M; ++k) {
                    ev.step();
                    s.add(ev.state().at(y));
                }
                return g - s.value();
            };
            const double g1 = gap(N), g4 = gap(4 * N);
            hb.update(std::max(-g1, -g4), detail::cell_str(x, y, 4 * N));
            if (g1 > 1e-12 && g4 > 1e-12) hs.update(g4 / g1, detail::cell_str(x, y, N));
        }
        out.push_back(detail::make_result("half-line Green function bounds its partial sums",
                                          hb.value, 1e-9, hb.where));
        out.push_back(detail::make_result("half-line Green gap shrinks by >= 1.5 from N to 4N",
                                          hs.value, 1.0 / 1.5, hs.where));
    }

    // Harmonic pair
    {
        const long long X = ctx.harmonic.X;
        const int zmax = std::max(std::abs(law.support_min), law.support_max);
        const double hp = harmonicity_residual(law, ctx.harmonic.f_plus, +1, X - zmax);
        const double hm = harmonicity_residual(law, ctx.harmonic.f_minus, -1, X - zmax);
        out.push_back(detail::make_result("harmonicity of f_+ and f_-", std::max(hp, hm),
                                          D.f_harmonic_tol, ""));
        const double edge = std::max(std::fabs(ctx.harmonic.fp(X) / X - 1.0),
                                     std::fabs(ctx.harmonic.fm(X) / X - 1.0));
        out.push_back(detail::make_result("f_(+/-)(X)/X within 5% of 1", edge, D.edge_ratio_tol, ""));
        double umin = 1e300;
        for (long long y = 1; y <= X; ++y) umin = std::min({umin, ctx.harmonic.up(y), ctx.harmonic.um(y)});
        const double uedge = std::max(std::fabs(ctx.harmonic.up(X) - 1.0), std::fabs(ctx.harmonic.um(X) - 1.0));
        auto r = detail::make_result("u^(+/-) positive and near 1 at the edge",
                                     umin > 0.0 ? uedge : 1.0, D.edge_ratio_tol, "");
        out.push_back(r);
        out.push_back(detail::make_result("ladder mean identity",
                                          std::fabs(ladder_mean_sum(law, ctx.harmonic) - ctx.sigma2 / 2.0),
                                          D.ladder_mean_tol, ""));
        out.push_back(detail::make_result("H_inf^+ normalization",
                                          std::fabs(ctx.entrance.h_inf_plus.total() - 1.0),
                                          D.ladder_mean_tol, ""));
        out.push_back(detail::make_result("H_-inf^- normalization",
                                          std::fabs(ctx.entrance.h_minus_inf.total() - 1.0),
                                          D.ladder_mean_tol, ""));
        const auto desc_dp = ladder_height_law(law, LadderDirection::Descending, 1 << 13, 1.0,
                                               LadderMethod::KilledWalkDP);
        out.push_back(detail::make_result(
            "f_+(1) equals the DP descending ladder mean", std::fabs(ctx.harmonic.fp(1) - desc_dp.mean),
            std::max(1e-6, 4.0 * desc_dp.deficit_estimate), "DP deficit " + std::to_string(desc_dp.deficit_estimate)));
    }

    // Strip exit and the Green-ratio identity
    {
        const long long N = opt.strip_N;
        detail::Worst w;
        for (long long x : {1LL, N / 4, N / 2}) {
            const auto se = strip_exit(law, x, N);
            const double ratio = green_point(ctx.potential, x, N) / green_point(ctx.potential, N, N);
            w.update(std::fabs(se.p_hit_N_before_0.value - ratio), "x=" + std::to_string(x));
        }
        out.push_back(detail::make_result("P_x[tau_N < tau_0] strip solve equals Green ratio",
                                          w.value, 1e-8, w.where));
    }

    // Left-continuity specific checks. With no jumps below -1 the walk enters
    // (-inf, 0] at 0, so x itself is harmonic for the killed walk: f_+(x) = x.
    if (law.left_continuous) {
        detail::Worst w;
        for (long long x : {1LL, 5LL}) w.update(negative_mass(law, x, opt.n_kernel).value, "x=" + std::to_string(x));
        for (long long x = 1; x <= ctx.harmonic.X; ++x)
            w.update(std::fabs(ctx.harmonic.fp(x) - static_cast<double>(x)), "f_+(" + std::to_string(x) + ")");
        for (long long x = 1; x <= ctx.potential.X; ++x)
            w.update(std::fabs(ctx.sigma2 * ctx.potential.a(x) - static_cast<double>(x)),
                     "sigma^2 a(" + std::to_string(x) + ")");
        w.update(std::fabs(ctx.constants.C_plus.value), "C+ windowed");
        w.update(std::fabs(ctx.constants.C_plus_entrance.value), "C+ entrance");
        out.push_back(detail::make_result("left-continuous closed forms", w.value, 1e-8, w.where));
    } else {
        out.push_back(detail::skipped("left-continuous closed forms", "law is not left continuous"));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bound suites

struct IvBoundReport {
    std::vector<long long> n;
    std::vector<double> sup;  ///< sup of q^n(x,y) n^{3/2} / ((|x|+1)|y|)
    double drift = 0.0;       ///< |sup_last / sup_prev - 1|
};

/// Empirical constant of q^n(x, y) <= C (|x|+1)|y| / n^{3/2} over all y and a
/// sampled set of starting points scaling with sqrt(n).
inline IvBoundReport iv_bound_suite(const StepLaw& law, const std::vector<long long>& ns) {
    IvBoundReport r;
    r.n = ns;
    const double sigma2 = moments(law).sigma2_d();
    for (long long n : ns) {
        const double rn = std::sqrt(sigma2 * static_cast<double>(n));
        std::set<long long> xs = {0, 1, 2, -1, -2};
        for (double s : {0.1, 0.25, 0.5, 1.0, 2.0}) {
            const auto v = static_cast<long long>(std::llround(s * rn));
            xs.insert(v);
            xs.insert(-v);
        }
        double best = 0.0;
        for (long long x : xs) {
            const auto q = absorbed_at_origin(law, x, n).slice.distribution;
            for (long long y = q.lo(); y <= q.hi(); ++y) {
                if (y == 0) continue;
                const double v = q.at(y) * std::pow(static_cast<double>(n), 1.5) /
                                 ((std::fabs(static_cast<double>(x)) + 1.0) * std::fabs(static_cast<double>(y)));
                best = std::max(best, v);
            }
        }
        r.sup.push_back(best);
    }
    if (r.sup.size() >= 2) r.drift = std::fabs(r.sup.back() / r.sup[r.sup.size() - 2] - 1.0);
    return r;
}

struct EnvelopeReport {
    double fitted_constant = 0.0;  ///< from the fit levels, times the margin
    double max_ratio_check = 0.0;  ///< worst h x sqrt(n) / H_inf^+(y) at the check level
    long long violations = 0;
    std::string worst_cell;
};

/// Fits C in h_x(n, y) <= C H_inf^+(y) / (x sqrt n) on the fit levels and
/// checks the envelope at the check level.
inline EnvelopeReport eq14_envelope_suite(const LawContext& ctx, const std::vector<long long>& fit_n,
                                          long long check_n, double margin) {
    const auto& hinf = ctx.entrance.h_inf_plus;
    auto worst = [&](long long n, std::string* where) {
        const double rn = std::sqrt(ctx.sigma2 * static_cast<double>(n));
        std::set<long long> xs = {1, 2, 5};
        for (double s : {0.25, 0.5, 1.0, 2.0}) xs.insert(std::max<long long>(1, std::llround(s * rn)));
        double best = 0.0;
        for (long long x : xs) {
            const auto fp = entrance_law(ctx.law, x, n);
            const auto& hn = fp.h[static_cast<std::size_t>(n - 1)];
            for (long long y = hn.lo(); y <= std::min<long long>(0, hn.hi()); ++y) {
                const double h = hn.at(y);
                if (h == 0.0) continue;
                const double env = hinf.at(y);
                const double ratio = env > 0.0 ? h * static_cast<double>(x) * std::sqrt(static_cast<double>(n)) / env
                                               : std::numeric_limits<double>::infinity();
                if (ratio > best) {
                    best = ratio;
                    if (where) *where = detail::cell_str(x, y, n);
                }
            }
        }
        return best;
    };
    EnvelopeReport r;
    for (long long n : fit_n) r.fitted_constant = std::max(r.fitted_constant, worst(n, nullptr));
    r.fitted_constant *= margin;
    r.max_ratio_check = worst(check_n, &r.worst_cell);
    r.violations = r.max_ratio_check > r.fitted_constant ? 1 : 0;
    return r;
}

}  // namespace rwlab
