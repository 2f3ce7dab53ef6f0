// rwlab: command-line front end for the exact engines and the verification
// harness.
//
// Exit status: 0 success, 1 computation error or failed check, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rwlab/rwlab.hpp"

namespace {

using namespace rwlab;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void usage_require(bool cond, const std::string& msg) {
    if (!cond) throw UsageError(msg);
}

int workers_from_env() {
    const char* v = std::getenv("RWLAB_WORKERS");
    if (!v || !*v) return 1;
    char* end = nullptr;
    const long w = std::strtol(v, &end, 10);
    usage_require(end && *end == '\0' && w >= 1 && w <= 256, "RWLAB_WORKERS must be an integer in [1, 256]");
    return static_cast<int>(w);
}

struct Common {
    std::string law_path;
    std::string out;
};

struct ComputeArgs {
    std::string mode = "point";
    long long x = 1;
    long long n = 1;
    double alpha = 0.5;
};

struct KernelArgs {
    long long window = 0;
    bool partial_sums = false;
};

struct VerifyArgs {
    std::string theorem;
    std::vector<double> xi;
    std::vector<double> eta;
    std::vector<long long> y;
    std::vector<long long> n;
    double a_circ = 0.0;
    double alpha = 0.0;
    double ell = 0.0;
    double tol = 0.0;
    bool pn_form = false;
    bool surrogate_pn = false;
    bool invariants = false;
    std::string summary;
};

struct ReportArgs {
    std::string out_dir;
};

void print_law(const StepLaw& law) {
    const auto m = moments(law);
    const auto ls = lattice_structure(law);
    std::printf("law: %s\n", law.name.c_str());
    std::printf("support: [%d, %d]\n", law.support_min, law.support_max);
    std::printf("sigma2: %s (%.17g)\n", m.sigma2.str().c_str(), m.sigma2_d());
    std::printf("lambda3: %s (%.17g)\n", m.lambda3.str().c_str(), m.lambda3_d());
    std::printf("period: %d\n", ls.period);
    std::printf("congruence_class: %d\n", ls.congruence_class);
    std::printf("left_continuous: %s\n", law.left_continuous ? "true" : "false");
    std::printf("right_continuous: %s\n", law.right_continuous ? "true" : "false");
}

KillMode parse_mode(const std::string& s) {
    if (s == "free") return KillMode::Free;
    if (s == "point") return KillMode::Point;
    if (s == "halfline") return KillMode::HalfLine;
    if (s == "partial") return KillMode::Partial;
    throw UsageError("unknown mode '" + s + "'");
}

std::string slice_csv(const std::string& mode, long long x, long long n, const LatticeDistribution& d) {
    std::ostringstream os;
    write_slice_csv(os, mode, x, n, d);
    return os.str();
}

int run_validate(const Common& c) {
    print_law(load_law(c.law_path));
    return kExitOk;
}

int run_compute(const Common& c, const ComputeArgs& a) {
    usage_require(!c.out.empty(), "compute needs --out");
    usage_require(a.n >= 1, "--n must be at least 1");
    const auto law = load_law(c.law_path);
    LatticeDistribution d;
    if (a.mode == "entrance") {
        usage_require(a.x >= 1, "entrance needs --x >= 1");
        d = entrance_law(law, a.x, a.n).h[static_cast<std::size_t>(a.n - 1)];
    } else {
        const KillMode m = parse_mode(a.mode);
        if (m == KillMode::HalfLine) usage_require(a.x >= 1, "halfline needs --x >= 1");
        if (m == KillMode::Partial) usage_require(a.alpha > 0.0 && a.alpha <= 1.0, "--alpha must lie in (0, 1]");
        switch (m) {
        case KillMode::Free: d = evolve_free(law, a.x, a.n); break;
        case KillMode::Point: d = absorbed_at_origin(law, a.x, a.n).slice.distribution; break;
        case KillMode::HalfLine: d = absorbed_on_halfline(law, a.x, a.n).slice.distribution; break;
        case KillMode::Partial: d = partial_absorption(law, a.alpha, a.x, a.n).slice.distribution; break;
        }
    }
    atomic_write(c.out, slice_csv(a.mode, a.x, a.n, d));
    std::printf("wrote %s (%lld sites, mass %.17g)\n", c.out.c_str(), d.hi() - d.lo() + 1, d.mass());
    return kExitOk;
}

int run_kernels(const Common& c, const KernelArgs& a) {
    const auto law = load_law(c.law_path);
    ContextOptions opt;
    if (a.window > 0) opt.potential_window = a.window;
    usage_require(opt.potential_window <= opt.harmonic_window, "--window may not exceed the harmonic window");
    const auto ctx = build_context(law, opt);
    std::optional<PotentialTable> ps;
    if (a.partial_sums)
        ps = a_partial_sums_table(law, std::min(opt.potential_window, defaults().partial_sum_window),
                                  defaults().partial_sum_steps);
    std::ostringstream os;
    os << "x,a,a_star,a_error,a_partial_sums,f_plus,f_minus,H_inf_plus\n";
    for (long long x = -ctx.potential.X; x <= ctx.potential.X; ++x) {
        os << x << ',' << format_g17(ctx.potential.a(x)) << ',' << format_g17(ctx.potential.a_star(x)) << ','
           << format_g17(ctx.potential.error(x)) << ',';
        if (ps && ps->contains(x)) os << format_g17(ps->a(x));
        os << ',';
        if (x >= 1) os << format_g17(ctx.harmonic.fp(x)) << ',' << format_g17(ctx.harmonic.fm(x));
        else os << ',';
        os << ',';
        if (x <= 0 && x >= ctx.entrance.h_inf_plus.pmf.lo()) os << format_g17(ctx.entrance.h_inf_plus.at(x));
        os << '\n';
    }
    if (!c.out.empty()) atomic_write(c.out, os.str());
    print_law(law);
    std::cout << constants_block(ctx.constants);
    return kExitOk;
}

void apply_overrides(GridSpec& g, const VerifyArgs& a) {
    if (!a.xi.empty()) g.xi = a.xi;
    if (!a.eta.empty()) g.eta = a.eta;
    if (!a.y.empty()) g.fixed_y = a.y;
    if (!a.n.empty()) g.n = a.n;
    if (a.a_circ > 0.0) g.a_circ = a.a_circ;
    if (a.alpha > 0.0) g.alpha = a.alpha;
    if (a.ell > 0.0) g.ell = a.ell;
    if (a.tol > 0.0) g.tolerance = a.tol;
    g.pn_form = a.pn_form;
    g.exact_pn = !a.surrogate_pn;
}

int run_invariants(const LawContext& ctx) {
    bool ok = true;
    for (const auto& r : invariant_suite(ctx)) {
        const char* tag = r.skipped ? "SKIP" : r.passed ? "PASS" : "FAIL";
        std::printf("%-4s %-52s worst=%.3g tol=%.3g %s\n", tag, r.name.c_str(), r.worst, r.tolerance,
                    r.detail.c_str());
        ok = ok && r.passed;
    }
    return ok ? kExitOk : kExitFail;
}

int run_verify(const Common& c, const VerifyArgs& a) {
    if (!a.invariants) usage_require(!a.theorem.empty(), "verify needs --theorem or --invariants");
    std::optional<TheoremId> id;
    if (!a.invariants) {
        try {
            id = theorem_from_string(a.theorem);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }
    for (long long n : a.n) usage_require(n >= 1, "--n entries must be positive");
    if (a.alpha != 0.0) usage_require(a.alpha > 0.0 && a.alpha <= 1.0, "--alpha must lie in (0, 1]");
    const int workers = workers_from_env();
    const auto law = load_law(c.law_path);
    const auto ctx = build_context(law);
    if (a.invariants) return run_invariants(ctx);

    GridSpec g;
    g.theorem = *id;
    g.law_name = law.name;
    apply_overrides(g, a);
    ExactOracle ex(law);
    const auto rep = compare_grid(g, ctx, ex, workers);
    if (!c.out.empty()) emit_report(rep, c.out);
    const std::string summary = report_summary(rep, &ctx.constants);
    if (!a.summary.empty()) atomic_write(a.summary, summary);
    std::cout << summary;
    return rep.passed() ? kExitOk : kExitFail;
}

/// Default grids, one per comparison-type estimate.
std::vector<GridSpec> standard_grids(const std::string& law) {
    std::vector<GridSpec> out;
    auto add = [&](TheoremId id, std::vector<double> xi, std::vector<double> eta, std::vector<long long> fy = {}) {
        GridSpec g;
        g.theorem = id;
        g.law_name = law;
        g.xi = std::move(xi);
        g.eta = std::move(eta);
        g.fixed_y = std::move(fy);
        out.push_back(g);
    };
    add(TheoremId::T11i, {0.2}, {0.2, -0.2});
    add(TheoremId::T11ii, {0.8}, {0.8, 1.2});
    add(TheoremId::T12_refined, {0.2}, {-0.2});
    add(TheoremId::T13, {0.2}, {0.2});
    add(TheoremId::T14, {0.2}, {}, {0, -1, -2});
    add(TheoremId::C11, {0.2}, {});
    add(TheoremId::P12_Qplus, {0.2}, {});
    add(TheoremId::T15_nu, {}, {});
    add(TheoremId::C12_particles, {}, {});
    add(TheoremId::P61_ralpha, {0.2}, {-0.2});
    add(TheoremId::ThmA_passage, {0.2}, {});
    return out;
}

int run_report(const Common& c, const ReportArgs& a) {
    usage_require(!a.out_dir.empty(), "report needs --out-dir");
    const int workers = workers_from_env();
    const auto law = load_law(c.law_path);
    const auto ctx = build_context(law);
    ExactOracle ex(law);
    namespace fs = std::filesystem;
    fs::create_directories(a.out_dir);
    std::vector<ComparisonReport> reports;
    std::ostringstream summary;
    for (const auto& g : standard_grids(law.name)) {
        reports.push_back(compare_grid(g, ctx, ex, workers));
        const auto& r = reports.back();
        emit_report(r, fs::path(a.out_dir) / (law.name + "_" + std::string(to_string(r.theorem)) + ".csv"));
        summary << report_summary(r) << '\n';
    }
    summary << convergence_report(reports).text() << '\n' << constants_block(ctx.constants);
    atomic_write(fs::path(a.out_dir) / (law.name + "_summary.txt"), summary.str());
    std::cout << summary.str();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rwlab: exact kernels and asymptotic checks for lattice random walks"};
    app.require_subcommand(1);
    Common common;
    ComputeArgs ca;
    KernelArgs ka;
    VerifyArgs va;
    ReportArgs ra;
    auto& D = mutable_defaults();

    auto add_law = [&](CLI::App* s) { s->add_option("--law", common.law_path, "law file (JSON)")->required(); };

    auto* validate = app.add_subcommand("validate", "check a law file and print its structure");
    add_law(validate);

    auto* compute = app.add_subcommand("compute", "write one exact kernel slice as CSV");
    add_law(compute);
    compute->add_option("--mode", ca.mode, "free | point | halfline | partial | entrance")
        ->check(CLI::IsMember({"free", "point", "halfline", "partial", "entrance"}));
    compute->add_option("--x", ca.x, "start site");
    compute->add_option("--n", ca.n, "number of steps")->required();
    compute->add_option("--alpha", ca.alpha, "absorption probability for partial mode");
    compute->add_option("--out", common.out, "output CSV")->required();

    auto* kernels = app.add_subcommand("kernels", "potential kernel, harmonic pair and constants");
    add_law(kernels);
    kernels->add_option("--window", ka.window, "potential table half-width");
    kernels->add_flag("--partial-sums", ka.partial_sums, "add the partial-sum column for |x| <= 50");
    kernels->add_option("--out", common.out, "output CSV");

    auto* verify = app.add_subcommand("verify", "compare exact values with an asymptotic estimate");
    add_law(verify);
    verify->add_option("--theorem", va.theorem, "estimate id, e.g. T13");
    verify->add_option("--xi", va.xi, "scaled x coordinates")->delimiter(',');
    verify->add_option("--eta", va.eta, "scaled y coordinates")->delimiter(',');
    verify->add_option("--y", va.y, "fixed y values (instead of --eta)")->delimiter(',');
    verify->add_option("--n", va.n, "n ladder")->delimiter(',');
    verify->add_option("--a-circ", va.a_circ, "region constant (> 1)");
    verify->add_option("--alpha", va.alpha, "partial absorption probability");
    verify->add_option("--ell", va.ell, "particle window");
    verify->add_option("--tol", va.tol, "final-error tolerance");
    verify->add_flag("--pn-form", va.pn_form, "use the p^n(y-x) form of the partial-absorption estimate");
    verify->add_flag("--surrogate-pn", va.surrogate_pn, "use the Gaussian surrogate instead of the exact p^n");
    verify->add_flag("--invariants", va.invariants, "run the invariant suite instead of a grid");
    verify->add_option("--out", common.out, "report CSV");
    verify->add_option("--summary", va.summary, "summary text file");

    auto* report = app.add_subcommand("report", "run the standard grids and write all reports");
    add_law(report);
    report->add_option("--out-dir", ra.out_dir, "output directory")->required();

    // Tolerance and window overrides.
    for (auto* s : {compute, kernels, verify, report}) {
        s->add_option("--potential-window", D.potential_window, "potential table half-width");
        s->add_option("--harmonic-window", D.harmonic_window, "harmonic pair window");
        s->add_option("--mass-tol", D.mass_tol, "mass conservation tolerance");
        s->add_option("--identity-tol", D.identity_tol, "exact identity tolerance");
        s->add_option("--duality-tol", D.duality_tol, "duality tolerance");
        s->add_option("--nu-tail-tol", D.nu_tail_tol, "tail bound allowed in nu_n");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*validate) return run_validate(common);
        if (*compute) return run_compute(common, ca);
        if (*kernels) return run_kernels(common, ka);
        if (*verify) return run_verify(common, va);
        if (*report) return run_report(common, ra);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitUsage;
}
