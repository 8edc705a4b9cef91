#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "classprime/heegner.hpp"

using namespace classprime;

TEST(Heegner, Examples)
{
    auto g = build_class_group(-23);
    auto p0 = heegner_point(g, g.index_of(reduce({1, 1, 6})));
    EXPECT_DOUBLE_EQ(p0.re, -0.5);
    EXPECT_NEAR(p0.im, std::sqrt(23.0) / 2, 1e-15);
    auto p1 = heegner_point(g, g.index_of(reduce({2, 1, 3})));
    EXPECT_DOUBLE_EQ(p1.re, -0.25);
    EXPECT_NEAR(p1.im, std::sqrt(23.0) / 4, 1e-15);

    auto g4 = build_class_group(-4);
    auto i = heegner_point(g4, 0);
    EXPECT_EQ(i.re, 0.0);
    EXPECT_EQ(i.im, 1.0);
}

TEST(Heegner, FundamentalDomainInvariants)
{
    for (i64 d : {-3, -4, -23, -84, -3299, -10007, -30020}) {
        auto g = build_class_group(d);
        double root = std::sqrt(static_cast<double>(-d));
        std::set<std::pair<double, double>> seen;
        for (std::size_t k = 0; k < g.h(); ++k) {
            auto p = heegner_point(g, k);
            EXPECT_LE(std::abs(p.re), 0.5);
            EXPECT_GE(p.im, std::sqrt(3.0) / 2 - 1e-12);
            EXPECT_LE(p.im, root / 2 + 1e-12);
            EXPECT_EQ(std::abs(p.im - root / 2) < 1e-12, p.a == 1);
            EXPECT_GE(4 * p.a * p.c, -d);  // exact: 4AC = |D| + B^2
            EXPECT_TRUE(seen.insert({p.re, p.im}).second) << d;
        }
    }
}

TEST(Coefficients, BoundFraction)
{
    auto g = build_class_group(-23);
    EXPECT_EQ(coefficient_bound_fraction(g, 10), 1.0);
    EXPECT_EQ(coefficient_bound_fraction(g, 1e-6), 0.0);
    auto big = build_class_group(-30020);
    double prev = 0;
    for (double psi : {0.1, 0.3, 1.0, 3.0, 100.0}) {
        double f = coefficient_bound_fraction(big, psi);
        EXPECT_GE(f, prev);
        prev = f;
    }
    EXPECT_EQ(prev, 1.0);
    EXPECT_EQ(max_coefficient(reduce({2, -1, 3})), 3);
}

TEST(Cramer, Examples)
{
    auto g = build_class_group(-23);
    double l = 3 * std::numbers::pi / std::sqrt(23.0);
    EXPECT_NEAR(cramer_prediction(g, 1, l), std::sqrt(23.0) * l * std::log(23.0), 1e-12);
    EXPECT_NEAR(cramer_prediction(g, 1, 1.96573), 29.56, 0.01);
    EXPECT_EQ(cramer_prediction(g, 0, l), 0.0);
    auto rw = cramer_via_class_number(g, 1);
    EXPECT_NEAR(rw.constant, std::numbers::pi, 1e-15);
    // sqrt|D| L = (2 pi / w) h makes the two scales agree exactly
    EXPECT_NEAR(rw.value, cramer_prediction(g, 1, l), 1e-9);
}

TEST(Repulsion, MinusTwentyThree)
{
    auto g = build_class_group(-23);
    auto lp = least_primes(g, 1000);
    auto rep = repulsion_report(g, lp);
    ASSERT_EQ(rep.rows.size(), 3u);
    std::size_t principal = g.index_of(reduce({1, 1, 6}));
    EXPECT_EQ(rep.class_with_max_least_prime, principal);
    EXPECT_EQ(*rep.max_least_prime, 23u);
    EXPECT_EQ(*rep.median_least_prime, 2u);
    double best = 0;
    std::size_t highest = 0;
    for (auto const & r : rep.rows)
        if (r.height > best) {
            best = r.height;
            highest = r.class_index;
        }
    EXPECT_EQ(highest, principal);
    EXPECT_NEAR(best, 2.398, 1e-3);
    EXPECT_TRUE(rep.all_floors_hold);
    EXPECT_EQ(g.element(rep.class_with_max_a).a(), 2);
}

TEST(Repulsion, SingleClassAndMedian)
{
    auto g = build_class_group(-163);
    auto rep = repulsion_report(g, least_primes(g, 1000));
    EXPECT_EQ(rep.rows.size(), 1u);
    EXPECT_EQ(*rep.max_least_prime, 41u);  // x^2 + xy + 41 y^2 first prime value at (0, 1)
    EXPECT_EQ(lower_median({5, 1, 9, 3}), 3u);
    EXPECT_FALSE(lower_median({}).has_value());
}
