#include <gtest/gtest.h>

#include <cmath>

#include "rwlab/exact_engine.hpp"
#include "rwlab/ladder_theory.hpp"
#include "rwlab/potential_theory.hpp"
#include "rwlab/standard_laws.hpp"

using namespace rwlab;

namespace {

struct L1Fixture : ::testing::Test {
    static void SetUpTestSuite() {
        law = new StepLaw(laws::l1());
        table = new PotentialTable(a_fourier_table(*law, 160));
        hp = new HarmonicPair(harmonic_pair(*law));
        en = new EntranceLaws(entrance_laws(*law, *hp, {5, 20, 50}));
        c = new WalkConstants(constants(*law, *table, *hp, en));
    }
    static void TearDownTestSuite() {
        delete c;
        delete en;
        delete hp;
        delete table;
        delete law;
    }
    static StepLaw* law;
    static PotentialTable* table;
    static HarmonicPair* hp;
    static EntranceLaws* en;
    static WalkConstants* c;
};
StepLaw* L1Fixture::law = nullptr;
PotentialTable* L1Fixture::table = nullptr;
HarmonicPair* L1Fixture::hp = nullptr;
EntranceLaws* L1Fixture::en = nullptr;
WalkConstants* L1Fixture::c = nullptr;

}  // namespace

TEST(Fourier, OriginIsZero) {
    for (const auto& law : laws::all()) EXPECT_EQ(a_fourier(law, 0).value, 0.0);
}

TEST(Fourier, SrwIsAbsoluteValue) {
    const auto srw = laws::srw();
    for (long long x : {-3LL, -1LL, 1LL, 3LL, 17LL}) EXPECT_NEAR(a_fourier(srw, x).value, std::fabs(x), 1e-10);
}

TEST_F(L1Fixture, FrozenValues) {
    EXPECT_NEAR(table->a(1), 1.25, 1e-12);
    EXPECT_NEAR(table->a(-1), 0.75, 1e-12);
    EXPECT_NEAR(table->a(5), 4.126543209876543, 1e-12);
    EXPECT_NEAR(table->a(10), 7.874993649342072, 1e-12);
    EXPECT_NEAR(table->a(40), 30.375, 1e-12);
    EXPECT_NEAR(table->a(50), 37.875, 1e-12);
}

TEST_F(L1Fixture, RightContinuousNegativeSideIsLinear) {
    // No up-jumps above 1: sigma^2 a(-x) = x for x > 0.
    for (long long x = 1; x <= 160; ++x) EXPECT_NEAR(table->sigma2 * table->a(-x), double(x), 1e-10);
}

TEST_F(L1Fixture, Harmonicity) { EXPECT_LT(harmonicity_residual(*law, *table), 1e-8); }

TEST_F(L1Fixture, Constants) {
    EXPECT_DOUBLE_EQ(c->lambda3, -0.25);
    EXPECT_NEAR(c->C_star.value, 0.25, 1e-10);
    EXPECT_NEAR(c->C_star_alt.value, 0.25, 1e-10);
    EXPECT_GT(c->C_plus.value, 0.0);
    EXPECT_NEAR(c->C_plus.value, 0.5, 1e-9);
    EXPECT_NEAR(c->C_plus_entrance.value, c->C_plus.value, 0.02 * c->C_plus.value);
    EXPECT_NEAR(c->C_minus.value, 0.0, 1e-9);
    // C* -+ lambda3 >= 0 and C+ = C* - lambda3
    EXPECT_GE(c->C_star.value - c->lambda3, 0.0);
    EXPECT_GE(c->C_star.value + c->lambda3, -1e-12);
    EXPECT_NEAR(c->C_plus.value, c->C_star.value - c->lambda3, 1e-9);
}

TEST_F(L1Fixture, ExpansionResidualDecays) {
    const auto rows = expansion_check(*table, *c);
    auto r = [&](long long x) {
        for (const auto& row : rows)
            if (row.x == x) return row.residual;
        return std::nan("");
    };
    EXPECT_LT(std::fabs(r(40)), std::fabs(r(10)));
    EXPECT_LT(std::fabs(r(-40)), std::fabs(r(-10)) + 1e-12);
    // symmetric part: sigma^2 (a(x) + a(-x)) - 2|x| -> 2 C*
    EXPECT_NEAR(table->sigma2 * (table->a(60) + table->a(-60)) - 120.0, 2.0 * c->C_star.value, 1e-9);
}

TEST_F(L1Fixture, EntranceIdentities) {
    const auto rep = potential_identities(*table, *hp, *en);
    ASSERT_EQ(rep.rows.size(), 3u);
    EXPECT_LT(rep.worst_potential_residual(), 1e-6);
    EXPECT_LT(rep.worst_overshoot_residual(), 1e-6);
    EXPECT_NEAR(rep.C_plus_entrance.value, c->C_plus.value, 0.02 * c->C_plus.value);
}

TEST_F(L1Fixture, GreenPointBoundsPartialSums) {
    const long long x = 3, y = 2;
    const double g = green_point(*table, x, y);
    double s = 0.0;
    Evolver ev(*law, KillMode::Point);
    ev.reset(x);
    double prev_gap = g;
    for (long long k = 1; k <= 2048; ++k) {
        ev.step();
        s += ev.state().at(y);
        if ((k & (k - 1)) == 0) {
            EXPECT_LT(s, g);
            EXPECT_LT(g - s, prev_gap);
            prev_gap = g - s;
        }
    }
}

TEST(Constants, SrwAllZero) {
    const auto srw = laws::srw();
    const auto t = a_fourier_table(srw, 120);
    const auto hp = harmonic_pair(srw);
    const auto c = constants(srw, t, hp);
    EXPECT_NEAR(c.C_plus.value, 0.0, 1e-8);
    EXPECT_NEAR(c.C_minus.value, 0.0, 1e-8);
    EXPECT_NEAR(c.C_star.value, 0.0, 1e-8);
    EXPECT_EQ(c.lambda3, 0.0);
    for (const auto& row : expansion_check(t, c)) EXPECT_NEAR(row.residual, 0.0, 1e-9);
}

TEST(Constants, NeedWideWindow) {
    const auto law = laws::l1();
    const auto t = a_fourier_table(law, 50);
    EXPECT_THROW(constants(law, t, harmonic_pair(law)), Error);
}

TEST(Constants, InconsistentRoutesAreReported) {
    const auto law = laws::l1();
    const auto t = a_fourier_table(law, 120);
    const auto hp = harmonic_pair(law);
    auto en = entrance_laws(law, hp);
    en.h_inf_plus.pmf = LatticeDistribution::point_mass(0);  // wrong overshoot law
    try {
        constants(law, t, hp, &en);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InconsistentEstimates);
    }
}

TEST(PartialSums, CrossValidateEveryLaw) {
    for (const auto& law : laws::all()) {
        const auto ps = a_partial_sums_table(law, 50);
        const auto fr = a_fourier_table(law, 50);
        double worst = 0.0;
        for (long long x = -50; x <= 50; ++x) worst = std::max(worst, std::fabs(ps.a(x) - fr.a(x)));
        EXPECT_LT(worst, 1e-6) << law.name;
    }
}

TEST(PartialSums, SrwSingleSite) {
    const auto r = a_partial_sums(laws::srw(), 5, 1 << 16);
    EXPECT_NEAR(r.extrapolated, 5.0, 1e-8);
}

TEST(Identities, SrwNoOvershoot) {
    const auto srw = laws::srw();
    const auto t = a_fourier_table(srw, 120);
    const auto hp = harmonic_pair(srw);
    const auto en = entrance_laws(srw, hp, {1, 4, 9});
    const auto rep = potential_identities(t, hp, en);
    for (const auto& row : rep.rows) {
        EXPECT_NEAR(row.f_excess, 0.0, 1e-12);
        EXPECT_NEAR(row.overshoot_residual, 0.0, 1e-12);
        EXPECT_NEAR(row.potential_residual, 0.0, 1e-9);
    }
}
