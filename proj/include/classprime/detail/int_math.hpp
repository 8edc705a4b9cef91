#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <tuple>

#include "classprime/errors.hpp"

namespace classprime {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

namespace detail {

inline std::string to_string(i128 v)
{
    if (v == 0)
        return "0";
    bool neg = v < 0;
    u128 u = neg ? u128(0) - u128(v) : u128(v);
    std::string s;
    while (u) {
        s.insert(s.begin(), char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg)
        s.insert(s.begin(), '-');
    return s;
}

inline i128 checked_mul(i128 x, i128 y)
{
    i128 r;
    if (__builtin_mul_overflow(x, y, &r))
        throw arithmetic_overflow("128-bit multiplication overflow");
    return r;
}

inline i128 checked_add(i128 x, i128 y)
{
    i128 r;
    if (__builtin_add_overflow(x, y, &r))
        throw arithmetic_overflow("128-bit addition overflow");
    return r;
}

inline i64 narrow(i128 v)
{
    if (v > INT64_MAX || v < INT64_MIN)
        throw arithmetic_overflow("value " + to_string(v) + " does not fit in 64 bits");
    return static_cast<i64>(v);
}

/* floor(x / y) for y > 0 */
inline i128 floor_div(i128 x, i128 y)
{
    i128 q = x / y;
    if ((x % y != 0) && ((x < 0) != (y < 0)))
        --q;
    return q;
}

/* non-negative residue */
inline i128 mod(i128 x, i128 m)
{
    i128 r = x % m;
    return r < 0 ? r + m : r;
}

/* largest r with r*r <= n */
inline u64 isqrt(u64 n)
{
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && u128(r) * r > n)
        --r;
    while (u128(r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

inline bool is_square(u64 n, u64 & root)
{
    root = isqrt(n);
    return root * root == n;
}

inline i128 gcd(i128 x, i128 y)
{
    if (x < 0) x = -x;
    if (y < 0) y = -y;
    while (y) {
        i128 t = x % y;
        x = y;
        y = t;
    }
    return x;
}

/* returns (g, u, v) with u*x + v*y = g = gcd(x, y) >= 0 */
inline std::tuple<i128, i128, i128> ext_gcd(i128 x, i128 y)
{
    i128 old_r = x, r = y;
    i128 old_s = 1, s = 0;
    i128 old_t = 0, t = 1;
    while (r != 0) {
        i128 q = old_r / r;
        std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
        std::tie(old_s, s) = std::make_tuple(s, old_s - q * s);
        std::tie(old_t, t) = std::make_tuple(t, old_t - q * t);
    }
    if (old_r < 0)
        return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

inline u64 mulmod(u64 x, u64 y, u64 m)
{
    return static_cast<u64>((u128(x) * y) % m);
}

inline u64 powmod(u64 base, u64 e, u64 m)
{
    u64 r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1)
            r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

/* base^e, throwing if the result exceeds `cap` */
inline u64 checked_pow(u64 base, unsigned e, u64 cap = UINT64_MAX)
{
    u128 r = 1;
    for (unsigned i = 0; i < e; ++i) {
        r *= base;
        if (r > cap)
            throw arithmetic_overflow("power exceeds cap");
    }
    return static_cast<u64>(r);
}

} // namespace detail
} // namespace classprime
