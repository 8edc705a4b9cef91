#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "classprime/classgroup.hpp"

namespace classprime {

inline constexpr u64 default_sieve_cap = 1'000'000'000ULL;

/* Kronecker symbol (d / n), any integers d and n. */
inline int kronecker(i64 d, i64 n)
{
    static constexpr int tab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};
    if (n == 0)
        return (d == 1 || d == -1) ? 1 : 0;
    if ((d & 1) == 0 && (n & 1) == 0)
        return 0;
    int k = 1;
    int v = 0;
    while ((n & 1) == 0) {
        n /= 2;
        ++v;
    }
    if (v & 1)
        k = tab2[detail::mod(d, 8)];
    u64 b;
    if (n < 0) {
        b = u64(-(n + 1)) + 1;
        if (d < 0)
            k = -k;
    } else {
        b = u64(n);
    }
    // Jacobi symbol (d / b), b odd and positive
    u64 a = static_cast<u64>(detail::mod(d, static_cast<i128>(b)));
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            if ((b & 7) == 3 || (b & 7) == 5)
                k = -k;
        }
        std::swap(a, b);
        if ((a & 3) == 3 && (b & 3) == 3)
            k = -k;
        a %= b;
    }
    return b == 1 ? k : 0;
}

inline int unit_count(i64 d)
{
    if (d == -3)
        return 6;
    if (d == -4)
        return 4;
    return 2;
}

inline std::vector<u64> small_primes(u64 limit)
{
    std::vector<u64> out;
    if (limit < 2)
        return out;
    std::vector<bool> comp(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (comp[i])
            continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += i)
            comp[j] = true;
    }
    return out;
}

/* Calls f(p) for every prime lo <= p <= hi in increasing order.  If f
 * returns bool, false stops the sweep.  Memory is O(sqrt(hi) + segment). */
template <class F>
void for_each_prime(u64 lo, u64 hi, F && f, u64 cap = default_sieve_cap)
{
    if (hi > cap)
        throw limit_too_large("sieve limit " + std::to_string(hi) + " exceeds cap "
                              + std::to_string(cap));
    if (hi < 2 || lo > hi)
        return;
    lo = std::max<u64>(lo, 2);
    auto const base = small_primes(detail::isqrt(hi));
    constexpr u64 segment = 1 << 18;
    std::vector<char> comp(segment);
    for (u64 start = lo; start <= hi; start += segment) {
        u64 end = std::min(hi, start + segment - 1);
        std::fill(comp.begin(), comp.end(), 0);
        for (u64 p : base) {
            if (p * p > end)
                break;
            u64 first = std::max(p * p, (start + p - 1) / p * p);
            for (u64 j = first; j <= end; j += p)
                comp[j - start] = 1;
        }
        for (u64 n = start; n <= end; ++n) {
            if (comp[n - start])
                continue;
            if constexpr (std::is_same_v<std::invoke_result_t<F, u64>, bool>) {
                if (!f(n))
                    return;
            } else {
                f(n);
            }
        }
        if (end == hi)
            break;
    }
}

inline std::vector<u64> sieve_primes(u64 limit, u64 cap = default_sieve_cap)
{
    std::vector<u64> out;
    for_each_prime(2, limit, [&](u64 p) { out.push_back(p); }, cap);
    return out;
}

/* Tonelli-Shanks: r with r^2 = a (mod p), p an odd prime and a a square.
 * Non-residue search starts at 2 so the result is deterministic. */
inline u64 sqrt_mod_prime(u64 a, u64 p)
{
    a %= p;
    if (a == 0)
        return 0;
    if (detail::powmod(a, (p - 1) / 2, p) != 1)
        throw std::domain_error("not a quadratic residue");
    if (p % 4 == 3)
        return detail::powmod(a, (p + 1) / 4, p);
    u64 q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (detail::powmod(z, (p - 1) / 2, p) != p - 1)
        ++z;
    u64 m = s;
    u64 c = detail::powmod(z, q, p);
    u64 t = detail::powmod(a, q, p);
    u64 r = detail::powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0;
        u64 tt = t;
        while (tt != 1) {
            tt = detail::mulmod(tt, tt, p);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + i + 1 < m; ++j)
            b = detail::mulmod(b, b, p);
        m = i;
        c = detail::mulmod(b, b, p);
        t = detail::mulmod(t, c, p);
        r = detail::mulmod(r, b, p);
    }
    return r;
}

enum class SplitKind { split, inert, ramified };

inline char const * to_string(SplitKind k)
{
    switch (k) {
    case SplitKind::split: return "split";
    case SplitKind::inert: return "inert";
    case SplitKind::ramified: return "ramified";
    }
    return "?";
}

struct PrimeClassification
{
    u64 p = 0;
    SplitKind kind = SplitKind::inert;
    std::optional<i64> sqrt_b;         // b = D (mod 2), b^2 = D (mod 4p)
    std::vector<std::size_t> classes;  // classes of the prime ideals above p
};

/* b with b = D (mod 2) and b^2 = D (mod 4p), for p split or ramified. */
inline i64 sqrt_disc_mod_4p(i64 d, u64 p)
{
    if (p == 2) {
        i64 r8 = static_cast<i64>(detail::mod(d, 8));
        for (i64 b = 0; b < 4; ++b)
            if (((b - d) & 1) == 0 && (b * b) % 8 == r8)
                return b;
        throw std::domain_error("2 is inert");
    }
    u64 r = sqrt_mod_prime(static_cast<u64>(detail::mod(d, static_cast<i128>(p))), p);
    i64 b = static_cast<i64>(r);
    if (((b - d) & 1) != 0)
        b = static_cast<i64>(p) - b;
    return b;
}

inline PrimeClassification classify_prime(u64 p, ClassGroup const & g)
{
    i64 d = g.disc().value();
    PrimeClassification out;
    out.p = p;
    int chi = kronecker(d, static_cast<i64>(p));
    if (chi == -1) {
        out.kind = SplitKind::inert;
        out.classes = {ClassGroup::identity()};
        return out;
    }
    out.kind = chi == 0 ? SplitKind::ramified : SplitKind::split;
    i64 b = sqrt_disc_mod_4p(d, p);
    out.sqrt_b = b;
    std::size_t c = ideal_class_of(static_cast<i64>(p), b, g);
    out.classes = {c};
    if (out.kind == SplitKind::split) {
        std::size_t ci = g.inverse(c);
        if (ci != c)
            out.classes.push_back(ci);
    }
    return out;
}

struct PrimeIdealPower
{
    std::size_t class_index;
    u64 norm;
    double lambda;  // log of the norm of the underlying prime ideal
};

/* The prime-power ideals P^k for the prime ideals P above p.  For a split
 * ambiguous prime both conjugates lie in the same class and two entries with
 * the same class are returned. */
inline std::vector<PrimeIdealPower> prime_power_ideals(PrimeClassification const & pc, unsigned k,
                                                       ClassGroup const & g)
{
    if (k == 0)
        throw std::invalid_argument("prime power exponent must be >= 1");
    double lp = std::log(static_cast<double>(pc.p));
    switch (pc.kind) {
    case SplitKind::inert:
        return {{ClassGroup::identity(), detail::checked_pow(pc.p, 2 * k), 2 * lp}};
    case SplitKind::ramified:
        return {{g.power(pc.classes[0], k), detail::checked_pow(pc.p, k), lp}};
    case SplitKind::split: {
        u64 norm = detail::checked_pow(pc.p, k);
        std::size_t c = pc.classes[0];
        return {{g.power(c, k), norm, lp}, {g.power(c, -static_cast<i64>(k)), norm, lp}};
    }
    }
    return {};
}

inline std::vector<PrimeIdealPower> prime_power_class(u64 p, unsigned k, ClassGroup const & g)
{
    return prime_power_ideals(classify_prime(p, g), k, g);
}

/* Number of (x, y) in Z^2 with Q(x, y) = n, summed over the reduced forms Q.
 * From 4aQ = (2ax + by)^2 + |D| y^2 and 4cQ = (2cy + bx)^2 + |D| x^2 the
 * box |y| <= sqrt(4an/|D|), |x| <= sqrt(4cn/|D|) holds every solution. */
inline u64 representation_count(u64 n, ClassGroup const & g)
{
    u64 ad = g.disc().abs();
    u64 count = 0;
    for (auto const & f : g.elements()) {
        i64 ymax = static_cast<i64>(detail::isqrt(static_cast<u64>(4 * u128(f.a()) * n / ad)));
        i64 xmax = static_cast<i64>(detail::isqrt(static_cast<u64>(4 * u128(f.c()) * n / ad)));
        for (i64 y = -ymax; y <= ymax; ++y)
            for (i64 x = -xmax; x <= xmax; ++x)
                if (evaluate(f.form(), x, y) == i128(n))
                    ++count;
    }
    return count;
}

inline u64 representation_count(u64 n, Discriminant const & d)
{
    return representation_count(n, enumerate_reduced_forms(d));
}

/* w_D * sum over e | n of (D / e) */
inline i64 dirichlet_r(u64 n, Discriminant const & d)
{
    if (n == 0)
        throw std::invalid_argument("dirichlet_r needs n >= 1");
    i64 s = 0;
    for (u64 e = 1; e * e <= n; ++e) {
        if (n % e != 0)
            continue;
        s += kronecker(d.value(), static_cast<i64>(e));
        if (e * e != n)
            s += kronecker(d.value(), static_cast<i64>(n / e));
    }
    return unit_count(d.value()) * s;
}

struct LValue
{
    double value = 0;
    /* |tail| <= 2 max|S(x)|/(terms+1) <= |D|/(terms+1), S the partial
     * character sums, which are bounded by |D|/2 over any range */
    double tail_bound = 0;
    u64 terms = 0;
};

inline u64 default_l_terms(Discriminant const & d)
{
    return std::max<u64>(1'000'000, 100 * d.abs());
}

/* Partial sum of sum chi_D(n)/n up to `terms`. */
inline LValue l_one_chi(Discriminant const & d, u64 terms)
{
    if (!d.fundamental() || d.value() >= 0)
        throw not_fundamental("L(1, chi_D) needs a negative fundamental discriminant");
    u64 q = d.abs();
    if (terms < q)
        throw std::invalid_argument("terms must be at least |D|");
    std::vector<signed char> chi(q);
    for (u64 r = 0; r < q; ++r)
        chi[r] = static_cast<signed char>(kronecker(d.value(), static_cast<i64>(r)));
    long double s = 0;
    u64 r = 1;
    for (u64 n = 1; n <= terms; ++n) {
        if (chi[r])
            s += static_cast<long double>(chi[r]) / static_cast<long double>(n);
        if (++r == q)
            r = 0;
    }
    return {static_cast<double>(s), static_cast<double>(q) / static_cast<double>(terms + 1), terms};
}

/* w sqrt|D| L(1, chi_D) / (2 pi) */
inline double class_number_from_l(Discriminant const & d, double l_one)
{
    return unit_count(d.value()) * std::sqrt(static_cast<double>(d.abs())) * l_one
           / (2 * std::numbers::pi);
}

} // namespace classprime
