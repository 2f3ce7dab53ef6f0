#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "rwlab/asymptotics.hpp"
#include "rwlab/standard_laws.hpp"

using namespace rwlab;

namespace {

struct Built {
    StepLaw law;
    PotentialTable table;
    HarmonicPair hp;
    EntranceLaws en;
    WalkConstants c;

    explicit Built(StepLaw l)
        : law(std::move(l)), table(a_fourier_table(law, 160)), hp(harmonic_pair(law)),
          en(entrance_laws(law, hp)), c(constants(law, table, hp, &en)) {}

    [[nodiscard]] Kernels kernels() const { return make_kernels(law, &table, &hp, &en.h_inf_plus, &c); }
};

}  // namespace

TEST(Kernels, GaussAtZero) {
    for (double s2 : {1.0, 4.0 / 3.0})
        for (double n : {1.0, 100.0}) EXPECT_NEAR(kernel_g(s2, n, 0.0), 1.0 / std::sqrt(2.0 * M_PI * s2 * n), 1e-16);
}

TEST(Kernels, PassageNormalization) {
    for (double xi : {0.3, 1.0, 2.5}) EXPECT_NEAR(passage_normalization(xi), 1.0, 1e-8) << xi;
}

TEST(Kernels, PassageConvolution) {
    EXPECT_NEAR(passage_convolution(1.0, 2.0), kernel_phi(3.0, 1.0), 1e-8);
    EXPECT_NEAR(passage_convolution(0.5, 0.7), kernel_phi(1.2, 1.0), 1e-8);
    EXPECT_NEAR(kernel_phi(3.0, 1.0), 0.013295545236, 1e-11);
}

TEST(Kernels, PassageDensityEdges) {
    EXPECT_EQ(kernel_phi(1.0, 0.0), 0.0);
    EXPECT_EQ(kernel_phi(100.0, 1e-3), 0.0);
    EXPECT_EQ(kernel_phi(-2.0, 1.3), kernel_phi(2.0, 1.3));
}

TEST(TheoremIds, RoundTrip) {
    for (TheoremId id : kAllTheorems) EXPECT_EQ(theorem_from_string(to_string(id)), id);
    EXPECT_THROW(theorem_from_string("T99"), Error);
}

TEST(Rhs, T11iiSurrogateArithmetic) {
    // unit variance, aperiodic surrogate at x = y = sqrt(n), n = 400
    Kernels K;
    K.sigma2 = 1.0;
    K.lattice = {1, 0};
    const double v = rhs(TheoremId::T11ii, K, 20, 20, 400);
    EXPECT_NEAR(v, (1.0 - std::exp(-2.0)) / std::sqrt(800.0 * M_PI), 1e-15);
}

TEST(Rhs, T11iiSignStructure) {
    Kernels K;
    K.sigma2 = 1.0;
    K.lattice = {1, 0};
    const GaussKernel g{1.0};
    for (long long x : {3LL, 11LL})
        for (long long y : {5LL, 17LL}) {
            const double v = rhs(TheoremId::T11ii, K, x, y, 300);
            // the bracket negates under x -> -x
            EXPECT_DOUBLE_EQ(v, -(g(300, double(y + x)) - g(300, double(y - x))));
            EXPECT_EQ(rhs(TheoremId::T11ii, K, -x, y, 300), 0.0);
        }
}

TEST(Rhs, SrwT13SmallStart) {
    const Built b(laws::srw());
    const auto K = b.kernels();
    for (long long n : {1000LL, 100000LL}) {
        const double v = rhs(TheoremId::T13, K, 1, 1, n);
        // p^n(0) ~ 2 / sqrt(2 pi n) on even n
        EXPECT_NEAR(v * n * std::sqrt(2.0 * M_PI * n), 4.0, 1e-12);
    }
}

TEST(Rhs, SrwT12Vanishes) {
    const Built b(laws::srw());
    const auto K = b.kernels();
    for (long long n : {64LL, 1024LL})
        for (long long x : {1LL, 5LL}) EXPECT_NEAR(rhs(TheoremId::T12_refined, K, x, -3, n), 0.0, 1e-10);
}

TEST(Rhs, T13ReflectionSymmetry) {
    const Built b(laws::wide());
    const Built r(reflected(laws::wide()));
    const auto K = b.kernels();
    const auto Kr = r.kernels();
    for (long long x : {1LL, 4LL, 9LL})
        for (long long y : {2LL, 7LL}) {
            const double u = rhs(TheoremId::T13, K, x, y, 500);
            const double w = rhs(TheoremId::T13, Kr, y, x, 500);
            EXPECT_NEAR(u, w, 1e-10 * std::fabs(u));
        }
}

TEST(Rhs, PureFunction) {
    const Built b(laws::l1());
    const auto K = b.kernels();
    for (TheoremId id : kAllTheorems) {
        RhsExtras ex;
        const long long y = id == TheoremId::T13 ? 2 : -2;
        const double u = rhs(id, K, 3, y, 256, ex);
        const double v = rhs(id, K, 3, y, 256, ex);
        EXPECT_EQ(std::memcmp(&u, &v, sizeof u), 0) << to_string(id);
    }
}

TEST(Rhs, C11ScalingCoherence) {
    // sqrt(sigma^2 n) = 64 and 128 for n = 3072 and 12288 on L1, so xi = 0.25
    // lands exactly on x = 16 and 32
    const Built b(laws::l1());
    const auto K = b.kernels();
    const double u = 3072.0 * rhs(TheoremId::C11, K, 16, 0, 3072);
    const double v = 12288.0 * rhs(TheoremId::C11, K, 32, 0, 12288);
    EXPECT_NEAR(u / v, 1.0, 0.01);
}

TEST(Rhs, PeriodicReachFactor) {
    const Built b(laws::skip3());
    const auto K = b.kernels();
    // skip3: n steps move by 2n mod 3, so at n = 100 only y - x = 2 mod 3
    EXPECT_EQ(rhs(TheoremId::T11ii, K, 2, 2, 100), 0.0);
    EXPECT_EQ(rhs(TheoremId::T14, K, 2, -1, 100), 0.0);
    const double on = rhs(TheoremId::T14, K, 1, 0, 100);
    const double bare = b.hp.fp(1) * kernel_g(K.sigma2, 100, 1.0) / 100.0 * b.en.h_inf_plus.at(0);
    EXPECT_NEAR(on, 3.0 * bare, 1e-15);
}

TEST(Rhs, PartialAbsorptionForms) {
    const Built b(laws::l1());
    const auto K = b.kernels();
    RhsExtras g_form, p_form;
    p_form.use_pn_form = true;
    p_form.pn = kernel_g(K.sigma2, 400, 10.0);
    // xy < 0: |x| + |y| = |y - x|, so both forms agree with the surrogate p^n
    const double u = rhs(TheoremId::P61_ralpha, K, 4, -6, 400, g_form);
    const double v = rhs(TheoremId::P61_ralpha, K, 4, -6, 400, p_form);
    EXPECT_NEAR(u, v, 1e-15);
    // alpha = 1 has no correction
    RhsExtras one;
    one.alpha = 1.0;
    EXPECT_EQ(rhs(TheoremId::P61_ralpha, K, 4, -6, 400, one), 0.0);
}

TEST(Rhs, PassageTimeSrw) {
    const Built b(laws::srw());
    const auto K = b.kernels();
    const double k = 501;
    EXPECT_NEAR(rhs(TheoremId::ThmA_passage, K, 1, 0, 501), std::exp(-1.0 / (2.0 * k)) / (std::sqrt(2.0 * M_PI) * std::pow(k, 1.5)),
                1e-15);
}

TEST(Rhs, MissingKernels) {
    const auto law = laws::l1();
    const auto K = make_kernels(law);
    for (TheoremId id : {TheoremId::T11i, TheoremId::T12_refined, TheoremId::T13, TheoremId::T14, TheoremId::C11,
                         TheoremId::EQ14bound}) {
        try {
            rhs(id, K, 2, -1, 100);
            ADD_FAILURE() << to_string(id);
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::MissingKernel);
        }
    }
    EXPECT_NO_THROW(rhs(TheoremId::T11ii, K, 2, 3, 100));
}

TEST(Rhs, NuLimit) {
    const Built b(laws::l1());
    const auto K = b.kernels();
    EXPECT_NEAR(rhs(TheoremId::T15_nu, K, 0, 0, 100), 0.25, 1e-9);
    RhsExtras ex;
    ex.ell = 1.0;
    EXPECT_NEAR(rhs(TheoremId::C12_particles, K, 0, 0, 100, ex), 0.25 * std::erf(1.0 / std::sqrt(2.0)), 1e-9);
}
