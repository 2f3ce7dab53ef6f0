#include <gtest/gtest.h>

#include <cmath>

#include "rwlab/standard_laws.hpp"
#include "rwlab/walk_model.hpp"

using namespace rwlab;

namespace {

ErrorCode code_of(std::vector<RawPair> pairs) {
    try {
        build_law(std::move(pairs));
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::Io;
}

}  // namespace

TEST(BuildLaw, SimpleWalk) {
    const auto law = laws::srw();
    const auto m = moments(law);
    EXPECT_EQ(m.sigma2, Rational(1));
    EXPECT_EQ(lattice_structure(law).period, 2);
    EXPECT_TRUE(law.left_continuous);
    EXPECT_TRUE(law.right_continuous);
}

TEST(BuildLaw, L1Moments) {
    const auto law = laws::l1();
    const auto m = moments(law);
    EXPECT_EQ(m.sigma2, Rational(4, 3));
    EXPECT_EQ(raw_moment(law, 3), Rational(-1));
    EXPECT_EQ(m.lambda3, Rational(-1, 4));
    EXPECT_EQ(m.m3_neg, Rational(-3, 2));
    EXPECT_EQ(lattice_structure(law).period, 1);
    EXPECT_FALSE(law.left_continuous);
    EXPECT_TRUE(law.right_continuous);
}

TEST(BuildLaw, SrwLambda3Vanishes) { EXPECT_EQ(moments(laws::srw()).lambda3, Rational(0)); }

TEST(BuildLaw, Rejections) {
    EXPECT_EQ(code_of({{-2, Rational(1, 2)}, {2, Rational(1, 2)}}), ErrorCode::Reducible);
    EXPECT_EQ(code_of({{-1, Rational(1, 2)}, {1, Rational(1, 3)}}), ErrorCode::NonUnitMass);
    EXPECT_EQ(code_of({{-1, Rational(1, 2)}, {2, Rational(1, 2)}}), ErrorCode::NonzeroMean);
    EXPECT_EQ(code_of({{-1, Rational(3, 2)}, {1, Rational(-1, 2)}}), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of({{1, Rational(1, 2)}, {1, Rational(1, 2)}}), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of({{-100, Rational(1, 2)}, {100, Rational(1, 2)}}), ErrorCode::SupportTooWide);
}

TEST(BuildLaw, ZeroWeightsAreDropped) {
    const auto law = build_law({{-1, Rational(1, 2)}, {0, Rational(0)}, {1, Rational(1, 2)}});
    EXPECT_EQ(law.support(), (std::vector<int>{-1, 1}));
}

TEST(Lattice, PeriodAndClass) {
    const auto ls = lattice_structure(laws::skip3());
    EXPECT_EQ(ls.period, 3);
    EXPECT_EQ(ls.congruence_class, 2);
    const auto srw = lattice_structure(laws::srw());
    EXPECT_EQ(srw.congruence_class, 1);
    EXPECT_EQ(lattice_structure(laws::odd_symmetric()).period, 2);
    EXPECT_EQ(lattice_structure(laws::wide()).period, 1);
}

TEST(Lattice, Reachability) {
    const auto srw = lattice_structure(laws::srw());
    EXPECT_TRUE(reachable(srw, 3, 1));
    EXPECT_FALSE(reachable(srw, 3, 2));
    EXPECT_TRUE(reachable(srw, 4, -2));
    const auto l1 = lattice_structure(laws::l1());
    for (long long n = 1; n < 6; ++n)
        for (long long d = -7; d < 7; ++d) EXPECT_TRUE(reachable(l1, n, d));
    // skip3: n steps land on d = 2n mod 3
    const auto s3 = lattice_structure(laws::skip3());
    EXPECT_TRUE(reachable(s3, 1, -1));
    EXPECT_TRUE(reachable(s3, 1, 2));
    EXPECT_FALSE(reachable(s3, 1, 0));
    EXPECT_TRUE(reachable(s3, 3, 0));
}

TEST(CharFn, Values) {
    for (const auto& law : laws::all()) {
        const auto [re, im] = char_fn(law, 0.0);
        EXPECT_DOUBLE_EQ(re, 1.0);
        EXPECT_DOUBLE_EQ(im, 0.0);
    }
    const auto s = char_fn(laws::srw(), M_PI);
    EXPECT_NEAR(s.first, -1.0, 1e-15);
    EXPECT_NEAR(s.second, 0.0, 1e-15);
    const auto l = char_fn(laws::l1(), M_PI);
    EXPECT_NEAR(l.first, -1.0 / 3.0, 1e-15);
    EXPECT_NEAR(l.second, 0.0, 1e-15);
}

TEST(Reflect, SwapsContinuityAndNegatesLambda3) {
    const auto l1 = laws::l1();
    const auto r = reflected(l1);
    EXPECT_EQ(r.support_min, -1);
    EXPECT_EQ(r.support_max, 2);
    EXPECT_TRUE(r.left_continuous);
    EXPECT_FALSE(r.right_continuous);
    EXPECT_EQ(moments(r).lambda3, -moments(l1).lambda3);
    EXPECT_EQ(moments(r).sigma2, moments(l1).sigma2);
}

TEST(StepLaw, CdfAndSurvival) {
    const auto l1 = laws::l1();
    EXPECT_NEAR(l1.cdf(-1), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(l1.cdf(-2), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(l1.survival(1), 0.5, 1e-15);
    EXPECT_NEAR(l1.cdf(5), 1.0, 1e-15);
}
