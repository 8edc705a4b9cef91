#include <complex>
#include <map>

#include <gtest/gtest.h>

#include "classprime/classgroup.hpp"
#include "oracles.hpp"

using namespace classprime;

TEST(Enumerate, Examples)
{
    auto g = enumerate_reduced_forms(validate_discriminant(-23));
    ASSERT_EQ(g.h(), 3u);
    EXPECT_EQ(g.element(0).form(), (QuadForm{1, 1, 6}));
    EXPECT_EQ(g.element(1).form(), (QuadForm{2, -1, 3}));
    EXPECT_EQ(g.element(2).form(), (QuadForm{2, 1, 3}));

    auto g4 = enumerate_reduced_forms(validate_discriminant(-4));
    ASSERT_EQ(g4.h(), 1u);
    EXPECT_EQ(g4.element(0).form(), (QuadForm{1, 0, 1}));

    EXPECT_EQ(enumerate_reduced_forms(validate_discriminant(-163)).h(), 1u);
}

TEST(Enumerate, MatchesInequalityOracle)
{
    for (i64 d = -3; d >= -5000; --d) {
        i64 r = ((d % 4) + 4) % 4;
        if (r != 0 && r != 1)
            continue;
        auto g = enumerate_reduced_forms(validate_discriminant(d));
        auto want = oracle::reduced_forms(d);
        ASSERT_EQ(g.h(), want.size()) << d;
        std::sort(want.begin(), want.end());
        for (std::size_t i = 0; i < want.size(); ++i)
            EXPECT_EQ(g.element(i).form(), want[i]);
    }
}

TEST(Enumerate, FundamentalRequirement)
{
    EXPECT_THROW(enumerate_reduced_forms(validate_discriminant(-63), true), not_fundamental);
    auto g = enumerate_reduced_forms(validate_discriminant(-63));
    EXPECT_TRUE(g.non_fundamental_warning());
    EXPECT_FALSE(build_class_group(-23).non_fundamental_warning());
    auto g12 = build_class_group(-12);
    ASSERT_EQ(g12.h(), 1u);
    EXPECT_EQ(g12.element(0).form(), (QuadForm{1, 0, 3}));
}

TEST(Structure, KnownClassNumbersAndInvariants)
{
    std::map<i64, std::vector<std::size_t>> table{
        {-3, {}},        {-4, {}},     {-7, {}},        {-8, {}},     {-15, {2}},     {-20, {2}},
        {-23, {3}},      {-39, {4}},   {-47, {5}},      {-56, {4}},   {-71, {7}},     {-84, {2, 2}},
        {-163, {}},      {-420, {2, 2, 2}},             {-5460, {2, 2, 2, 2}},        {-3299, {3, 9}},
        {-4027, {3, 3}},
    };
    for (auto const & [d, orders] : table) {
        auto g = build_class_group(d);
        EXPECT_EQ(g.orders(), orders) << d;
    }
}

namespace {

/* number of x with x^k = 1 in Z/n_1 x ... x Z/n_r */
std::size_t kernel_size(std::vector<std::size_t> const & orders, std::size_t k)
{
    std::size_t s = 1;
    for (auto n : orders)
        s *= std::gcd(n, k);
    return s;
}

std::size_t brute_order(ReducedForm const & f)
{
    auto e = identity_form(f.discriminant());
    auto x = f;
    std::size_t k = 1;
    while (!(x == e)) {
        x = compose(x, f);
        ++k;
    }
    return k;
}

} // namespace

TEST(Structure, ElementOrderCountsMatchInvariantFactors)
{
    for (i64 d : {-23, -84, -420, -3299, -4027, -5460, -9999, -10007, -21311, -30020}) {
        auto disc = validate_discriminant(d);
        if (!disc.fundamental())
            continue;
        auto g = build_class_group(disc);
        std::vector<std::size_t> ord(g.h());
        for (std::size_t i = 0; i < g.h(); ++i)
            ord[i] = brute_order(g.element(i));
        std::size_t prod = 1;
        for (auto n : g.orders())
            prod *= n;
        EXPECT_EQ(prod, g.h()) << d;
        for (std::size_t j = 1; j < g.orders().size(); ++j)
            EXPECT_EQ(g.orders()[j] % g.orders()[j - 1], 0u) << d;
        for (std::size_t k = 1; k <= g.h(); ++k) {
            if (g.h() % k)
                continue;
            std::size_t count = 0;
            for (auto o : ord)
                count += (k % o == 0);
            EXPECT_EQ(count, kernel_size(g.orders(), k)) << d << " k=" << k;
        }
    }
}

TEST(Structure, CoordinatesRebuildEveryClass)
{
    for (i64 d : {-23, -84, -3299, -5460, -10007, -30020}) {
        auto g = build_class_group(d);
        for (std::size_t i = 0; i < g.h(); ++i) {
            auto x = identity_form(d);
            auto a = g.coords(i);
            for (std::size_t j = 0; j < g.rank(); ++j)
                for (std::uint32_t t = 0; t < a[j]; ++t)
                    x = compose(x, g.element(g.basis()[j].index));
            EXPECT_EQ(x, g.element(i)) << d;
            EXPECT_EQ(g.element_at_linear(g.linear_of(i)), i);
        }
        for (std::size_t j = 0; j < g.rank(); ++j)
            EXPECT_EQ(brute_order(g.element(g.basis()[j].index)), g.basis()[j].order);
    }
}

TEST(Structure, TableArithmeticMatchesComposition)
{
    for (i64 d : {-84, -3299, -10007}) {
        auto g = build_class_group(d);
        for (std::size_t i = 0; i < g.h(); ++i)
            for (std::size_t j = 0; j < g.h(); j += 3)
                EXPECT_EQ(g.element(g.multiply(i, j)), compose(g.element(i), g.element(j)));
        for (std::size_t i = 0; i < g.h(); ++i) {
            EXPECT_EQ(g.element(g.inverse(i)), opposite(g.element(i)));
            EXPECT_EQ(g.element(g.power(i, 2)), compose(g.element(i), g.element(i)));
        }
    }
}

TEST(Characters, MinusTwentyThree)
{
    auto g = build_class_group(-23);
    auto chars = characters(g);
    ASSERT_EQ(chars.size(), 3u);
    EXPECT_TRUE(chars[0].is_trivial());
    std::size_t gen = g.basis()[0].index;
    double const pi = std::acos(-1.0);
    auto w = std::polar(1.0, 2 * pi / 3);
    for (std::size_t t = 1; t < 3; ++t) {
        auto v = chars[t](g, gen);
        EXPECT_TRUE(std::abs(v - w) < 1e-12 || std::abs(v - std::conj(w)) < 1e-12);
    }
}

TEST(Characters, Orthogonality)
{
    for (i64 d : {-23, -84, -3299, -4027, -5460, -10007}) {
        auto g = build_class_group(d);
        auto chars = characters(g);
        std::size_t h = g.h();
        ASSERT_EQ(chars.size(), h);
        std::vector<std::vector<std::complex<double>>> m(h, std::vector<std::complex<double>>(h));
        for (std::size_t s = 0; s < h; ++s)
            for (std::size_t a = 0; a < h; ++a) {
                m[s][a] = chars[s](g, a);
                EXPECT_NEAR(std::abs(m[s][a]), 1.0, 1e-12);
            }
        for (std::size_t s = 0; s < h; ++s)
            for (std::size_t t = 0; t < h; ++t) {
                std::complex<double> rows = 0, cols = 0;
                for (std::size_t a = 0; a < h; ++a) {
                    rows += m[s][a] * std::conj(m[t][a]);
                    cols += m[a][s] * std::conj(m[a][t]);
                }
                double want = s == t ? double(h) : 0.0;
                EXPECT_NEAR(std::abs(rows - want), 0.0, 1e-10) << d;
                EXPECT_NEAR(std::abs(cols - want), 0.0, 1e-10) << d;
            }
    }
}

TEST(Characters, MultiplicativeAndRealCount)
{
    for (i64 d : {-84, -3299, -5460, -10007}) {
        auto g = build_class_group(d);
        auto chars = characters(g);
        std::size_t order_le_2 = 0, real = 0;
        for (std::size_t a = 0; a < g.h(); ++a)
            order_le_2 += brute_order(g.element(a)) <= 2;
        for (auto const & c : chars) {
            bool is_real = true;
            for (std::size_t a = 0; a < g.h(); ++a)
                is_real = is_real && std::abs(c(g, a).imag()) < 1e-12;
            real += is_real;
            for (std::size_t a = 0; a < g.h(); a += 2)
                for (std::size_t b = 0; b < g.h(); b += 5) {
                    std::size_t ab = g.index_of(compose(g.element(a), g.element(b)));
                    EXPECT_LT(std::abs(c(g, ab) - c(g, a) * c(g, b)), 1e-12);
                }
        }
        EXPECT_EQ(order_le_2, real) << d;
    }
}

TEST(IdealClass, Examples)
{
    auto g = build_class_group(-23);
    EXPECT_EQ(g.element(ideal_class_of(2, 1, g)).form(), (QuadForm{2, 1, 3}));
    EXPECT_EQ(g.element(ideal_class_of(3, 1, g)).form(), (QuadForm{2, -1, 3}));
    EXPECT_THROW(ideal_class_of(2, 0, g), invalid_ideal_basis);
}
