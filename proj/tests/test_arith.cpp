#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "classprime/arith.hpp"
#include "oracles.hpp"

using namespace classprime;

namespace {

std::vector<u64> naive_primes(u64 limit)
{
    std::vector<u64> out;
    for (u64 n = 2; n <= limit; ++n)
        if (oracle::is_prime(static_cast<i64>(n)))
            out.push_back(n);
    return out;
}

/* Legendre symbol by Euler's criterion with plain 64-bit arithmetic */
int euler(i64 d, i64 p)
{
    i64 a = ((d % p) + p) % p;
    if (a == 0)
        return 0;
    i64 r = 1, b = a, e = (p - 1) / 2;
    while (e) {
        if (e & 1)
            r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

} // namespace

TEST(Kronecker, Examples)
{
    EXPECT_EQ(kronecker(-23, 2), 1);
    EXPECT_EQ(kronecker(-23, 3), 1);
    EXPECT_EQ(kronecker(-23, 5), -1);
    EXPECT_EQ(kronecker(-23, 23), 0);
    EXPECT_EQ(kronecker(-4, 3), -1);
    EXPECT_EQ(kronecker(-4, 5), 1);
    EXPECT_EQ(kronecker(-4, 2), 0);
    EXPECT_EQ(kronecker(-3, 2), -1);
    EXPECT_EQ(kronecker(-3, 7), 1);
}

TEST(Kronecker, MatchesEulerAndTheEvenRule)
{
    for (i64 d = -3; d >= -400; --d) {
        i64 r = ((d % 4) + 4) % 4;
        if (r != 0 && r != 1)
            continue;
        for (i64 p = 3; p < 300; p += 2) {
            if (!oracle::is_prime(p))
                continue;
            EXPECT_EQ(kronecker(d, p), euler(d, p)) << d << " " << p;
        }
        // (D/2) is 0 for even D, 1 for D = +-1 (8), -1 for D = +-3 (8)
        i64 r8 = ((d % 8) + 8) % 8;
        int want = (d % 2 == 0) ? 0 : (r8 == 1 || r8 == 7) ? 1 : -1;
        EXPECT_EQ(kronecker(d, 2), want) << d;
    }
}

TEST(Kronecker, MultiplicativeAndPeriodic)
{
    for (i64 d : {-3, -4, -8, -23, -84, -163, -1003}) {
        for (i64 m = 1; m < 60; ++m)
            for (i64 n = 1; n < 60; ++n)
                EXPECT_EQ(kronecker(d, m * n), kronecker(d, m) * kronecker(d, n));
        for (i64 n = 1; n < 500; ++n)
            EXPECT_EQ(kronecker(d, n), kronecker(d, n - d));
    }
}

TEST(Sieve, SmallAndBoundaries)
{
    EXPECT_EQ(sieve_primes(10), (std::vector<u64>{2, 3, 5, 7}));
    EXPECT_TRUE(sieve_primes(1).empty());
    EXPECT_EQ(sieve_primes(2), (std::vector<u64>{2}));
    EXPECT_THROW(sieve_primes(1000, 100), limit_too_large);
    EXPECT_THROW(sieve_primes(default_sieve_cap + 1), limit_too_large);
}

TEST(Sieve, PrimeCountingAgainstNaive)
{
    auto fast = sieve_primes(1'000'000);
    EXPECT_EQ(fast.size(), 78498u);
    std::vector<char> comp(1'000'001, 0);
    std::vector<u64> slow;
    for (u64 i = 2; i <= 1'000'000; ++i) {
        if (comp[i])
            continue;
        slow.push_back(i);
        for (u64 j = i * i; j <= 1'000'000; j += i)
            comp[j] = 1;
    }
    EXPECT_EQ(fast, slow);
}

TEST(Sieve, RangesAndEarlyStop)
{
    std::vector<u64> got;
    for_each_prime(1'000'000'000 - 1000, 1'000'000'000, [&](u64 p) { got.push_back(p); });
    for (u64 p : got)
        EXPECT_TRUE(oracle::is_prime(static_cast<i64>(p)));
    EXPECT_EQ(got.back(), 999'999'937u);

    std::vector<u64> mid;
    for_each_prime(1000, 5000, [&](u64 p) { mid.push_back(p); });
    auto all = naive_primes(5000);
    std::vector<u64> want;
    for (u64 p : all)
        if (p >= 1000)
            want.push_back(p);
    EXPECT_EQ(mid, want);

    int seen = 0;
    for_each_prime(2, 1'000'000, [&](u64) { return ++seen < 5; });
    EXPECT_EQ(seen, 5);
}

TEST(SqrtMod, AllResidues)
{
    for (u64 p : naive_primes(1500)) {
        for (u64 a = 0; a < p; ++a) {
            if (euler(static_cast<i64>(a), static_cast<i64>(p)) == -1)
                continue;
            u64 r = sqrt_mod_prime(a, p);
            EXPECT_EQ(r * r % p, a) << a << " mod " << p;
        }
    }
}

TEST(Classify, Examples)
{
    auto g = build_class_group(-23);
    auto c2 = classify_prime(2, g);
    EXPECT_EQ(c2.kind, SplitKind::split);
    ASSERT_EQ(c2.classes.size(), 2u);
    std::vector<QuadForm> got{g.element(c2.classes[0]).form(), g.element(c2.classes[1]).form()};
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, (std::vector<QuadForm>{{2, -1, 3}, {2, 1, 3}}));

    EXPECT_EQ(classify_prime(5, g).kind, SplitKind::inert);
    auto c23 = classify_prime(23, g);
    EXPECT_EQ(c23.kind, SplitKind::ramified);
    EXPECT_EQ(c23.classes, std::vector<std::size_t>{0});
}

TEST(Classify, AgreesWithRepresentationByEachForm)
{
    for (i64 d : {-23, -84}) {
        auto g = build_class_group(d);
        for (u64 p : naive_primes(10'000)) {
            auto pc = classify_prime(p, g);
            for (std::size_t c = 0; c < g.h(); ++c) {
                bool listed = pc.kind != SplitKind::inert
                              && std::find(pc.classes.begin(), pc.classes.end(), c) != pc.classes.end();
                EXPECT_EQ(oracle::represents(g.element(c).form(), static_cast<i64>(p)), listed)
                    << d << " p=" << p << " class " << g.element(c);
            }
        }
    }
}

TEST(Classify, SqrtHasTheRightParity)
{
    for (i64 d : {-3, -4, -8, -23, -84, -1003}) {
        auto g = build_class_group(d);
        for (u64 p : naive_primes(3000)) {
            auto pc = classify_prime(p, g);
            if (!pc.sqrt_b)
                continue;
            i64 b = *pc.sqrt_b;
            EXPECT_EQ(((b - d) % 2 + 2) % 2, 0);
            EXPECT_EQ(((b * b - d) % (4 * static_cast<i64>(p)) + 4 * static_cast<i64>(p))
                          % (4 * static_cast<i64>(p)),
                      0);
        }
    }
}

TEST(PrimePowers, Examples)
{
    auto g = build_class_group(-23);
    std::size_t f = g.index_of(reduce({2, 1, 3})), finv = g.index_of(reduce({2, -1, 3}));

    auto p2 = prime_power_class(2, 2, g);
    ASSERT_EQ(p2.size(), 2u);
    std::vector<std::size_t> cls{p2[0].class_index, p2[1].class_index};
    std::sort(cls.begin(), cls.end());
    std::vector<std::size_t> want{f, finv};
    std::sort(want.begin(), want.end());
    EXPECT_EQ(cls, want);  // f^2 = f^-1 and (f^-1)^2 = f
    EXPECT_EQ(p2[0].norm, 4u);

    auto p3 = prime_power_class(2, 3, g);
    EXPECT_EQ(p3[0].class_index, 0u);
    EXPECT_EQ(p3[1].class_index, 0u);

    auto p5 = prime_power_class(5, 1, g);
    ASSERT_EQ(p5.size(), 1u);
    EXPECT_EQ(p5[0].class_index, 0u);
    EXPECT_EQ(p5[0].norm, 25u);
    EXPECT_NEAR(p5[0].lambda, std::log(25.0), 1e-15);

    auto p23 = prime_power_class(23, 2, g);
    ASSERT_EQ(p23.size(), 1u);
    EXPECT_EQ(p23[0].norm, 529u);
    EXPECT_THROW(prime_power_class(2, 0, g), std::invalid_argument);
}

TEST(PrimePowers, ClassesAgreeWithRepeatedComposition)
{
    for (i64 d : {-3299, -10007}) {
        auto g = build_class_group(d);
        for (u64 p : naive_primes(400)) {
            auto pc = classify_prime(p, g);
            if (pc.kind != SplitKind::split)
                continue;
            auto base = g.element(pc.classes[0]);
            auto x = base;
            for (unsigned k = 1; k <= 4; ++k) {
                auto ideals = prime_power_ideals(pc, k, g);
                EXPECT_EQ(g.element(ideals[0].class_index), x);
                EXPECT_EQ(g.element(ideals[1].class_index), opposite(x));
                x = compose(x, base);
            }
        }
    }
}

TEST(Representation, Examples)
{
    auto d23 = validate_discriminant(-23);
    auto d4 = validate_discriminant(-4);
    EXPECT_EQ(representation_count(2, d23), 4u);  // (+-1, 0) in both classes above 2
    EXPECT_EQ(representation_count(23, d23), 2u);
    EXPECT_EQ(representation_count(5, d23), 0u);
    EXPECT_EQ(representation_count(5, d4), 8u);
    EXPECT_EQ(dirichlet_r(6, d23), 8);
    EXPECT_EQ(dirichlet_r(1, validate_discriminant(-3)), 6);
}

TEST(Representation, LatticeCountEqualsDivisorSum)
{
    for (i64 d : {-3, -4, -7, -8, -23, -84, -103, -420}) {
        auto disc = validate_discriminant(d);
        auto g = build_class_group(disc);
        for (u64 n = 1; n <= 600; ++n)
            EXPECT_EQ(static_cast<i64>(representation_count(n, g)), dirichlet_r(n, disc)) << d << " " << n;
    }
}

TEST(Representation, PrimeCountsBoundedByFour)
{
    for (i64 d : {-23, -47, -84, -1003}) {
        auto disc = validate_discriminant(d);
        auto g = build_class_group(disc);
        u64 total = 0, primes = 0;
        for (u64 p : naive_primes(3000)) {
            u64 r = representation_count(p, g);
            if (static_cast<i64>(p) % d != 0) {
                EXPECT_LE(r, 4u);
            }
            total += r;
            ++primes;
        }
        EXPECT_LE(total, 4 * primes);
    }
}

TEST(LValue, KnownValues)
{
    double const pi = std::numbers::pi;
    struct Case
    {
        i64 d;
        double want;
    };
    for (auto c : {Case{-23, 3 * pi / std::sqrt(23.0)}, Case{-4, pi / 4}, Case{-3, pi / (3 * std::sqrt(3.0))},
                   Case{-163, pi / std::sqrt(163.0)}}) {
        auto disc = validate_discriminant(c.d);
        auto l = l_one_chi(disc, default_l_terms(disc));
        EXPECT_LE(std::abs(l.value - c.want), l.tail_bound + 1e-12) << c.d;
        EXPECT_EQ(l.terms, default_l_terms(disc));
    }
    EXPECT_THROW(l_one_chi(validate_discriminant(-12), 1000), not_fundamental);
    EXPECT_THROW(l_one_chi(validate_discriminant(-23), 10), std::invalid_argument);
}

TEST(LValue, ClassNumberRoundTrip)
{
    for (i64 d = -3; d >= -2000; --d) {
        i64 r = ((d % 4) + 4) % 4;
        if (r != 0 && r != 1)
            continue;
        auto disc = validate_discriminant(d);
        if (!disc.fundamental())
            continue;
        auto l = l_one_chi(disc, 100 * disc.abs());
        double est = class_number_from_l(disc, l.value);
        EXPECT_EQ(std::llround(est), static_cast<long long>(oracle::reduced_forms(d).size())) << d;
    }
}

TEST(Units, Table)
{
    EXPECT_EQ(unit_count(-3), 6);
    EXPECT_EQ(unit_count(-4), 4);
    EXPECT_EQ(unit_count(-23), 2);
    EXPECT_EQ(unit_count(-8), 2);
}
