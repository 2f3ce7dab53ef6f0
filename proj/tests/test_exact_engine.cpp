#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "rwlab/exact_engine.hpp"
#include "rwlab/ladder_theory.hpp"
#include "rwlab/standard_laws.hpp"

using namespace rwlab;

namespace {

// Brute-force path enumeration: independent of the convolution engine.
std::map<long long, double> enumerate_paths(const StepLaw& law, KillMode mode, long long x, int n) {
    std::map<long long, double> out;
    std::function<void(long long, int, double)> go = [&](long long s, int k, double w) {
        if (k == n) {
            out[s] += w;
            return;
        }
        for (int z : law.support()) {
            const long long t = s + z;
            if (mode == KillMode::Point && t == 0) continue;
            if (mode == KillMode::HalfLine && t <= 0) continue;
            go(t, k + 1, w * law.p(z));
        }
    };
    go(x, 0, 1.0);
    return out;
}

}  // namespace

TEST(EvolveFree, SmallCases) {
    const auto d = evolve_free(laws::srw(), 0, 2);
    EXPECT_DOUBLE_EQ(d.at(0), 0.5);
    EXPECT_DOUBLE_EQ(d.at(2), 0.25);
    EXPECT_DOUBLE_EQ(d.at(-2), 0.25);
    EXPECT_DOUBLE_EQ(d.at(1), 0.0);
    EXPECT_DOUBLE_EQ(evolve_free(laws::l1(), 0, 2).at(2), 0.25);
    const auto id = evolve_free(laws::wide(), 7, 0);
    EXPECT_DOUBLE_EQ(id.at(7), 1.0);
    EXPECT_DOUBLE_EQ(id.mass(), 1.0);
}

TEST(AbsorbedAtOrigin, SrwTwoSteps) {
    EXPECT_DOUBLE_EQ(absorbed_at_origin(laws::srw(), 1, 2).slice.distribution.at(1), 0.25);
}

TEST(AbsorbedAtOrigin, MatchesPathEnumeration) {
    for (const auto& law : {laws::wide(), laws::l1(), laws::skip3()})
        for (long long x : {-2LL, 1LL, 3LL}) {
            const int n = 7;
            const auto q = absorbed_at_origin(law, x, n).slice.distribution;
            for (const auto& [y, w] : enumerate_paths(law, KillMode::Point, x, n))
                EXPECT_NEAR(q.at(y), w, 1e-14) << law.name << " x=" << x << " y=" << y;
        }
}

TEST(AbsorbedOnHalfline, MatchesPathEnumeration) {
    for (const auto& law : {laws::wide(), laws::l1()})
        for (long long x : {1LL, 4LL}) {
            const int n = 7;
            const auto q = absorbed_on_halfline(law, x, n).slice.distribution;
            const auto ref = enumerate_paths(law, KillMode::HalfLine, x, n);
            for (const auto& [y, w] : ref) EXPECT_NEAR(q.at(y), w, 1e-14);
            double total = 0.0;
            for (const auto& kv : ref) total += kv.second;
            EXPECT_NEAR(q.mass(), total, 1e-14);
        }
}

TEST(EvolveRational, AgreesWithFloatEngine) {
    const auto law = laws::wide();
    const long long n = 40;
    for (KillMode m : {KillMode::Free, KillMode::Point, KillMode::HalfLine}) {
        const auto exact = evolve_rational(law, m, 3, n);
        LatticeDistribution d;
        if (m == KillMode::Free) d = evolve_free(law, 3, n);
        if (m == KillMode::Point) d = absorbed_at_origin(law, 3, n).slice.distribution;
        if (m == KillMode::HalfLine) d = absorbed_on_halfline(law, 3, n).slice.distribution;
        for (const auto& [y, w] : exact)
            EXPECT_NEAR(d.at(y), static_cast<double>(w), 1e-16 + 1e-13 * static_cast<double>(w));
    }
}

TEST(EvolveRational, ExactFraction) {
    // paths 1-2-1-2-1 and 1-2-3-2-1
    EXPECT_EQ(evolve_rational(laws::srw(), KillMode::Point, 1, 4).at(1), Rational(1, 8));
}

TEST(PartialAbsorption, Endpoints) {
    const auto law = laws::l1();
    const auto full = absorbed_at_origin(law, 2, 50).slice.distribution;
    const auto free = evolve_free(law, 2, 50);
    const auto a1 = partial_absorption(law, 1.0, 2, 50).slice.distribution;
    const auto a0 = partial_absorption(law, 0.0, 2, 50).slice.distribution;
    for (long long y = free.lo(); y <= free.hi(); ++y) {
        EXPECT_DOUBLE_EQ(a1.at(y), full.at(y));
        EXPECT_NEAR(a0.at(y), free.at(y), 1e-17);
    }
}

TEST(PartialAbsorption, RationalHalf) {
    const auto law = laws::l1();
    const auto exact = evolve_rational(law, KillMode::Partial, 1, 20, Rational(1, 2));
    const auto d = partial_absorption(law, 0.5, 1, 20).slice.distribution;
    for (const auto& [y, w] : exact) EXPECT_NEAR(d.at(y), static_cast<double>(w), 1e-16);
}

TEST(MassConservation, PointAndHalfline) {
    for (const auto& law : laws::all()) {
        const auto p = absorbed_at_origin(law, 2, 500).slice;
        EXPECT_NEAR(p.total_mass(), 1.0, 1e-12) << law.name;
        const auto h = absorbed_on_halfline(law, 2, 500).slice;
        EXPECT_NEAR(h.total_mass(), 1.0, 1e-12) << law.name;
    }
}

TEST(EntranceLaw, Bookkeeping) {
    const auto fp = entrance_law(laws::wide(), 3, 300);
    double total = fp.survival;
    for (std::size_t k = 0; k < fp.h.size(); ++k) {
        EXPECT_NEAR(fp.h[k].mass(), fp.passage_time[k], 1e-16);
        EXPECT_LE(fp.h[k].hi(), 0);
        total += fp.passage_time[k];
    }
    EXPECT_NEAR(total, 1.0, 1e-13);
    // one step from 1 under L1: entrance at 0 or -1 at time 1
    const auto one = entrance_law(laws::l1(), 1, 1);
    EXPECT_NEAR(one.h_at(1, 0), 1.0 / 6.0, 1e-16);
    EXPECT_NEAR(one.h_at(1, -1), 1.0 / 6.0, 1e-16);
}

TEST(NegativeMass, LeftContinuousIsZero) {
    const auto srw = laws::srw();
    for (long long x : {1LL, 4LL, 9LL}) EXPECT_EQ(negative_mass(srw, x, 300).value, 0.0);
    EXPECT_EQ(negative_mass(laws::skip3(), 3, 300).value, 0.0);
}

TEST(NegativeMass, L1OneStep) { EXPECT_NEAR(negative_mass(laws::l1(), 1, 1).value, 1.0 / 6.0, 1e-16); }

TEST(Nu, SrwVanishes) {
    for (long long n : {16LL, 256LL}) {
        const auto r = nu_and_particles(laws::srw(), n, default_x_max(laws::srw(), n), 1.0);
        EXPECT_EQ(r.nu, 0.0);
        EXPECT_EQ(r.expected_particles, 0.0);
    }
}

TEST(Nu, SingleRunMatchesPerStartSum) {
    const auto law = laws::l1();
    const long long n = 64, xmax = default_x_max(law, n);
    const auto r = nu_and_particles(law, n, xmax, 1.0);
    double s = 0.0;
    for (long long x = 1; x <= xmax; ++x) s += negative_mass(law, x, n).value;
    EXPECT_NEAR(r.nu, s, 1e-13);
    EXPECT_LT(r.tail_bound, 1e-6);
}

TEST(Nu, TailBoundEnforced) {
    try {
        nu_and_particles(laws::l1(), 1024, 2, 1.0);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TailNotNegligible);
    }
}

TEST(Hoeffding, BoundDominatesExactTail) {
    const auto law = laws::wide();
    const long long n = 100, xmax = 40;
    const auto p = evolve_free(law, 0, n);
    double tail = 0.0;
    for (long long x = xmax + 1; x <= n * 4; ++x) tail += p.mass_between(p.lo(), -x - 1);
    EXPECT_LE(tail, hoeffding_tail_sum(n, xmax, law.span()));
}

TEST(StripExit, SrwGamblersRuin) {
    const auto srw = laws::srw();
    for (long long x : {1LL, 7LL, 19LL}) {
        const auto s = strip_exit(srw, x, 20);
        EXPECT_NEAR(s.p_up_before_T, x / 20.0, 1e-12);
        EXPECT_NEAR(s.p_hit_N_before_0.value, x / 20.0, 1e-10);
        EXPECT_NEAR(s.mean_overshoot, 0.0, 1e-12);
    }
}

TEST(StripExit, RightContinuousExitsAtN) {
    // Up-jumps of size 1 reach [N, inf) at N, so optional stopping of f_+
    // gives P_x = f_+(x) / f_+(N) exactly.
    const auto law = laws::l1();
    const auto hp = harmonic_pair(law, 100);
    for (long long x : {1LL, 5LL, 30LL}) {
        const auto s = strip_exit(law, x, 50);
        EXPECT_NEAR(s.p_up_before_T, hp.fp(x) / hp.fp(50), 1e-12);
        EXPECT_NEAR(s.mean_overshoot, 0.0, 1e-12);
        EXPECT_LE(s.p_hit_N_before_0.lower, s.p_hit_N_before_0.value);
        EXPECT_LE(s.p_hit_N_before_0.value, s.p_hit_N_before_0.upper);
    }
}

TEST(StripExit, FrozenL1Value) {
    const auto s = strip_exit(laws::l1(), 5, 50);
    EXPECT_NEAR(s.p_hit_N_before_0.value, 0.1044980857, 1e-9);
    EXPECT_NEAR(s.p_up_before_T, 0.1044980857, 1e-9);
}

TEST(StripExit, ArgumentChecks) {
    EXPECT_THROW(strip_exit(laws::l1(), 0, 10), Error);
    EXPECT_THROW(strip_exit(laws::l1(), 10, 10), Error);
}

TEST(Evolver, WindowBudget) {
    const auto law = laws::l1();
    Evolver ev(law, KillMode::Free, 0.0, 16);
    ev.reset(0);
    try {
        for (int k = 0; k < 10; ++k) ev.step();
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::WindowOverflow);
    }
}

TEST(Evolver, RejectsBadArguments) {
    const auto law = laws::l1();
    EXPECT_THROW(Evolver(law, KillMode::Partial, 1.5), Error);
    Evolver ev(law, KillMode::HalfLine);
    EXPECT_THROW(ev.reset(0), Error);
}

TEST(SliceCsv, Format) {
    std::ostringstream os;
    write_slice_csv(os, "point", 1, 2, absorbed_at_origin(laws::srw(), 1, 2).slice.distribution);
    const std::string s = os.str();
    EXPECT_EQ(s.rfind("mode,x,n,y,value\n", 0), 0u);
    EXPECT_NE(s.find("point,1,2,1,0.25\n"), std::string::npos);
}
