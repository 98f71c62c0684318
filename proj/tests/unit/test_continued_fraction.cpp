// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "specflow/continued_fraction.hpp"
#include "specflow/errors.hpp"

using specflow::BigInt;
using specflow::ContinuedFraction;
using specflow::QuadraticIrrational;

namespace {

ContinuedFraction golden(int depth = 30) {
    return ContinuedFraction::expand(QuadraticIrrational::parse("(-1+sqrt(5))/2"), depth);
}

}  // namespace

TEST(QuadraticIrrational, ParsesEquivalentForms) {
    auto a = QuadraticIrrational::parse("(-1+sqrt(5))/2");
    auto b = QuadraticIrrational::parse("(sqrt(5)-1)/2");
    EXPECT_EQ(a, b);
    EXPECT_NEAR(static_cast<double>(a.approx()), (std::sqrt(5.0) - 1) / 2, 1e-15);
    EXPECT_EQ(QuadraticIrrational::parse(a.text()), a);

    auto r = QuadraticIrrational::parse("sqrt(2)-1");
    EXPECT_NEAR(static_cast<double>(r.approx()), std::sqrt(2.0) - 1, 1e-15);
    EXPECT_EQ(QuadraticIrrational::parse("sqrt(8)/2"), QuadraticIrrational::parse("sqrt(2)"));
}

TEST(QuadraticIrrational, NegativeSurdReducesIntoUnitInterval) {
    auto a = QuadraticIrrational::parse("(3-sqrt(5))/2");
    EXPECT_NEAR(static_cast<double>(a.approx()), (3 - std::sqrt(5.0)) / 2, 1e-15);
}

TEST(QuadraticIrrational, RejectsRationalAndGarbage) {
    EXPECT_THROW(QuadraticIrrational::parse("sqrt(4)"), specflow::ValidationError);
    EXPECT_THROW(QuadraticIrrational::parse("(1+sqrt(9))/2"), specflow::ValidationError);
    EXPECT_THROW(QuadraticIrrational::parse("sqrt(-2)"), specflow::ValidationError);
    EXPECT_THROW(QuadraticIrrational::parse("pi"), specflow::ValidationError);
    EXPECT_THROW(QuadraticIrrational::parse("(1+sqrt(5))/0"), specflow::ValidationError);
}

TEST(QuadraticIrrational, FixedPointAgreesWithLongDouble) {
    for (const char* s : {"(-1+sqrt(5))/2", "sqrt(2)-1", "sqrt(3)-1", "(sqrt(13)-3)/2", "sqrt(7)-2"}) {
        auto q = QuadraticIrrational::parse(s);
        long double fp = specflow::raw_to_long_double(q.fixed_point());
        EXPECT_NEAR(static_cast<double>(fp - q.approx()), 0.0, 1e-18) << s;
    }
}

TEST(ContinuedFraction, GoldenDepth8) {
    auto cf = golden(8);
    ASSERT_EQ(cf.depth(), 8);
    const std::uint64_t q[] = {1, 1, 2, 3, 5, 8, 13, 21};
    for (int n = 0; n < 8; ++n) {
        EXPECT_EQ(cf.quotient(n + 1), 1u);
        EXPECT_EQ(cf.q(n), q[n]) << n;
    }
    EXPECT_EQ(cf.C(), 2);
    EXPECT_TRUE(cf.periodic());
    EXPECT_EQ(cf.period(), 1);
}

TEST(ContinuedFraction, SqrtTwoMinusOneDepth4) {
    auto cf = ContinuedFraction::expand(QuadraticIrrational::parse("sqrt(2)-1"), 4);
    const std::uint64_t q[] = {1, 2, 5, 12};
    for (int n = 0; n < 4; ++n) {
        EXPECT_EQ(cf.quotient(n + 1), 2u);
        EXPECT_EQ(cf.q(n), q[n]);
    }
    EXPECT_EQ(cf.C(), 3);
}

TEST(ContinuedFraction, PreperiodicExpansion) {
    // sqrt(7) - 2 = [0; 1, 1, 1, 4, 1, 1, 1, 4, ...]
    auto cf = ContinuedFraction::expand(QuadraticIrrational::parse("sqrt(7)-2"), 12);
    const std::uint64_t a[] = {1, 1, 1, 4, 1, 1, 1, 4, 1, 1, 1, 4};
    for (int n = 1; n <= 12; ++n) EXPECT_EQ(cf.quotient(n), a[n - 1]) << n;
    EXPECT_EQ(cf.C(), 5);
    EXPECT_EQ(cf.period(), 4);
    EXPECT_EQ(cf.quotient(40), 4u);
}

TEST(ContinuedFraction, RecurrenceIsExactAndDeterminantHolds) {
    for (const char* s : {"(-1+sqrt(5))/2", "sqrt(2)-1", "(sqrt(13)-3)/2", "sqrt(31)-5"}) {
        auto cf = ContinuedFraction::expand(QuadraticIrrational::parse(s), 60);
        for (int n = 1; n < cf.depth(); ++n) {
            EXPECT_EQ(cf.q(n + 1), BigInt(cf.quotient(n + 1)) * cf.q(n) + cf.q(n - 1));
            EXPECT_EQ(cf.p(n + 1), BigInt(cf.quotient(n + 1)) * cf.p(n) + cf.p(n - 1));
            BigInt det = cf.p(n + 1) * cf.q(n) - cf.p(n) * cf.q(n + 1);
            EXPECT_TRUE(det == 1 || det == -1);
        }
    }
}

TEST(ContinuedFraction, SandwichHoldsForGolden) {
    auto cf = golden(9);
    for (int n = 0; n <= 8; ++n) EXPECT_TRUE(cf.sandwich(n).ok()) << n;
}

TEST(ContinuedFraction, DistanceOfQnAlpha) {
    auto cf = golden(12);
    long double d = cf.distance_qn_alpha(5);
    EXPECT_NEAR(static_cast<double>(d), 0.05573, 1e-5);
    EXPECT_GT(d, 1.0L / 32);
    EXPECT_LT(d, 1.0L / 8);
    for (int n = 1; n + 1 <= cf.depth(); ++n) {
        long double dn = cf.distance_qn_alpha(n);
        long double qn1 = static_cast<long double>(cf.q_u64(n + 1));
        EXPECT_GT(dn, 1 / (2 * qn1));
        EXPECT_LT(dn, 1 / qn1);
        EXPECT_GE(dn, 1 / (2.0L * cf.C() * cf.q_u64(n)));
    }
}

TEST(ContinuedFraction, BoundedQuotientsGiveGeometricGrowth) {
    auto cf = ContinuedFraction::expand(QuadraticIrrational::parse("sqrt(31)-5"), 50);
    for (int n = 0; n < 50; ++n) EXPECT_LE(cf.q(n + 1), BigInt(cf.C()) * cf.q(n));
}

TEST(ContinuedFraction, FromDoubleIsFlagged) {
    auto cf = ContinuedFraction::from_double(0.6180339887498949, 40);
    EXPECT_TRUE(cf.low_precision());
    EXPECT_GE(cf.depth(), 20);
    for (int n = 1; n <= 20; ++n) EXPECT_EQ(cf.quotient(n), 1u);
}

TEST(ContinuedFraction, FirstIndexAbove) {
    auto cf = golden(20);
    EXPECT_EQ(cf.first_index_q_above(500), 14);
    EXPECT_EQ(cf.q_u64(14), 610u);
}

TEST(ThreeGap, GoldenFivePoints) {
    auto cf = golden();
    auto part = specflow::three_gap_partition(cf, 5);
    ASSERT_EQ(part.gaps.size(), 5u);
    ASSERT_EQ(part.distinct.size(), 2u);
    EXPECT_NEAR(static_cast<double>(part.length(0)), 0.14590, 1e-5);
    EXPECT_NEAR(static_cast<double>(part.length(1)), 0.14590, 1e-5);
    for (int i = 2; i < 5; ++i) EXPECT_NEAR(static_cast<double>(part.length(i)), 0.23607, 1e-5);
    EXPECT_NEAR(static_cast<double>(part.total_length()), 1.0, 1e-30);
}

TEST(ThreeGap, SinglePointIsWholeCircle) {
    auto part = specflow::three_gap_partition(golden(), 1);
    ASSERT_EQ(part.gaps.size(), 1u);
    EXPECT_EQ(part.length(0), 1.0L);
}

TEST(ThreeGap, MatchesSortingOracleAndHasAtMostThreeLengths) {
    for (const char* s : {"(-1+sqrt(5))/2", "sqrt(2)-1", "sqrt(7)-2"}) {
        auto cf = ContinuedFraction::expand(QuadraticIrrational::parse(s), 40);
        for (std::size_t k : {2u, 3u, 10u, 57u, 100u, 377u, 1000u}) {
            auto part = specflow::three_gap_partition(cf, k);
            auto ref = oracle::gaps_by_sorting(cf.alpha_approx(), k);
            ASSERT_EQ(part.gaps.size(), ref.size());
            for (std::size_t i = 0; i < k; ++i)
                EXPECT_NEAR(static_cast<double>(part.length(i) - ref[i]), 0.0, 1e-15);
            EXPECT_LE(part.distinct.size(), 3u) << s << " k=" << k;
        }
    }
}

TEST(GapConstants, SelfConsistent) {
    for (const char* s : {"(-1+sqrt(5))/2", "sqrt(2)-1"}) {
        auto cf = ContinuedFraction::expand(QuadraticIrrational::parse(s), 40);
        auto c = specflow::estimate_gap_constants(cf, 50);
        EXPECT_GT(c.c2, 0);
        EXPECT_LE(c.c2 / c.c1, 1.0L);
        for (std::size_t k = 1; k <= 50; ++k) {
            auto part = specflow::three_gap_partition(cf, k);
            EXPECT_LT(part.max_length() * k, c.c1);
            EXPECT_GE(part.min_length() * k, c.c2);
        }
    }
}

TEST(GapConstants, DenominatorPartitionHasTwoKnownLengths) {
    // q_n points: lengths ||q_{n-1} alpha|| and ||q_{n-1} alpha|| + ||q_n alpha||, so the
    // largest gap exceeds the average 1/q_n but stays below 2/q_n.
    auto cf = golden();
    for (int n = 2; n <= 14; ++n) {
        std::size_t qn = cf.q_u64(n);
        auto part = specflow::three_gap_partition(cf, qn);
        ASSERT_EQ(part.distinct.size(), 2u) << "q_n=" << qn;
        long double small = cf.distance_qn_alpha(n - 1);
        long double big = small + cf.distance_qn_alpha(n);
        EXPECT_NEAR(static_cast<double>(part.min_length() - small), 0.0, 1e-18);
        EXPECT_NEAR(static_cast<double>(part.max_length() - big), 0.0, 1e-18);
        EXPECT_GT(part.max_length() * qn, 1.0L);
        EXPECT_LT(part.max_length() * qn, 2.0L);
    }
}
