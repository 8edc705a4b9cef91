#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <utility>

#include "classprime/detail/int_math.hpp"
#include "classprime/errors.hpp"

namespace classprime {

inline bool is_squarefree(u64 n)
{
    if (n == 0)
        return false;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0)
                return false;
        }
    }
    return true;
}

class Discriminant
{
    i64 value_ = 0;
    bool fundamental_ = false;

    Discriminant(i64 v, bool f) : value_(v), fundamental_(f) {}
    friend Discriminant validate_discriminant(i64 d);

  public:
    Discriminant() = default;

    i64 value() const { return value_; }
    bool fundamental() const { return fundamental_; }
    u64 abs() const { return value_ < 0 ? u64(-value_) : u64(value_); }
    /* parity of the principal form's middle coefficient */
    i64 parity() const { return value_ & 1; }

    bool operator==(Discriminant const & o) const { return value_ == o.value_; }
};

/* Checks d = 0, 1 (mod 4) and determines whether d is a fundamental
 * discriminant.  Sign is not restricted here. */
inline Discriminant validate_discriminant(i64 d)
{
    i64 r = static_cast<i64>(detail::mod(d, 4));
    if (r != 0 && r != 1)
        throw not_a_discriminant(std::to_string(d) + " is not 0 or 1 mod 4");
    bool fundamental = false;
    if (r == 1) {
        fundamental = d != 1 && is_squarefree(d < 0 ? u64(-d) : u64(d));
    } else {
        i64 m = d / 4;
        i64 mr = static_cast<i64>(detail::mod(m, 4));
        fundamental = (mr == 2 || mr == 3) && is_squarefree(m < 0 ? u64(-m) : u64(m));
    }
    return Discriminant(d, fundamental);
}

/* a x^2 + b x y + c y^2 */
struct QuadForm
{
    i64 a = 0;
    i64 b = 0;
    i64 c = 0;

    i64 discriminant() const
    {
        return detail::narrow(i128(b) * b - 4 * i128(a) * c);
    }

    auto operator<=>(QuadForm const &) const = default;
};

/* Builds (a, b, (b^2 - D)/(4a)); requires 4a | b^2 - D. */
inline QuadForm form_with_disc(i64 a, i64 b, i64 d)
{
    i128 num = i128(b) * b - d;
    if (a <= 0 || num % (4 * i128(a)) != 0)
        throw invalid_ideal_basis("4a does not divide b^2 - D for a=" + std::to_string(a)
                                  + ", b=" + std::to_string(b));
    return {a, b, detail::narrow(num / (4 * i128(a)))};
}

inline i128 evaluate(QuadForm const & f, i128 x, i128 y)
{
    using detail::checked_add;
    using detail::checked_mul;
    i128 ax2 = checked_mul(checked_mul(f.a, x), x);
    i128 bxy = checked_mul(checked_mul(f.b, x), y);
    i128 cy2 = checked_mul(checked_mul(f.c, y), y);
    return checked_add(checked_add(ax2, bxy), cy2);
}

/* Element of SL2(Z).  The substitution (x, y) -> (p x + q y, r x + s y). */
struct Unimodular
{
    i128 p = 1, q = 0;
    i128 r = 0, s = 1;

    Unimodular operator*(Unimodular const & o) const
    {
        using detail::checked_add;
        using detail::checked_mul;
        return {checked_add(checked_mul(p, o.p), checked_mul(q, o.r)),
                checked_add(checked_mul(p, o.q), checked_mul(q, o.s)),
                checked_add(checked_mul(r, o.p), checked_mul(s, o.r)),
                checked_add(checked_mul(r, o.q), checked_mul(s, o.s))};
    }

    i128 det() const { return p * s - q * r; }
};

/* f o M, i.e. the form (x, y) -> f(p x + q y, r x + s y) */
inline QuadForm act(QuadForm const & f, Unimodular const & m)
{
    using detail::checked_add;
    using detail::checked_mul;
    i128 a = evaluate(f, m.p, m.r);
    i128 c = evaluate(f, m.q, m.s);
    i128 b = checked_add(checked_add(checked_mul(checked_mul(2 * i128(f.a), m.p), m.q),
                                     checked_mul(f.b, checked_add(checked_mul(m.p, m.s),
                                                                  checked_mul(m.q, m.r)))),
                         checked_mul(checked_mul(2 * i128(f.c), m.r), m.s));
    return {detail::narrow(a), detail::narrow(b), detail::narrow(c)};
}

/* Positive definite form with |b| <= a <= c, and b >= 0 whenever |b| = a
 * or a = c.  Only obtainable through reduce(). */
class ReducedForm
{
    QuadForm f_;

    explicit ReducedForm(QuadForm f) : f_(f) {}
    friend std::pair<ReducedForm, Unimodular> reduce_tracked(QuadForm f);

  public:
    i64 a() const { return f_.a; }
    i64 b() const { return f_.b; }
    i64 c() const { return f_.c; }
    i64 discriminant() const { return f_.discriminant(); }
    QuadForm const & form() const { return f_; }

    bool is_ambiguous() const { return f_.b == 0 || f_.b == f_.a || f_.a == f_.c; }

    auto operator<=>(ReducedForm const & o) const { return f_ <=> o.f_; }
    bool operator==(ReducedForm const & o) const { return f_ == o.f_; }
};

inline bool is_reduced(QuadForm const & f)
{
    if (f.a <= 0)
        return false;
    i64 ab = f.b < 0 ? -f.b : f.b;
    if (!(ab <= f.a && f.a <= f.c))
        return false;
    if ((ab == f.a || f.a == f.c) && f.b < 0)
        return false;
    return true;
}

/* Gauss reduction.  Returns the reduced form together with M such that
 * reduced = f o M. */
inline std::pair<ReducedForm, Unimodular> reduce_tracked(QuadForm f)
{
    if (f.a <= 0 || f.discriminant() >= 0)
        throw std::domain_error("reduce requires a positive definite form");
    i128 d = f.discriminant();
    i128 a = f.a, b = f.b, c = f.c;
    Unimodular m;
    for (;;) {
        // translate b into (-a, a]
        if (b <= -a || b > a) {
            i128 k = detail::floor_div(a - b, 2 * a);
            b += 2 * a * k;
            c = (b * b - d) / (4 * a);
            m = m * Unimodular{1, k, 0, 1};
        }
        if (a > c) {
            std::swap(a, c);
            b = -b;
            m = m * Unimodular{0, -1, 1, 0};
            continue;
        }
        if (a == c && b < 0) {
            b = -b;
            m = m * Unimodular{0, -1, 1, 0};
        }
        break;
    }
    return {ReducedForm(QuadForm{detail::narrow(a), detail::narrow(b), detail::narrow(c)}), m};
}

inline ReducedForm reduce(QuadForm const & f)
{
    return reduce_tracked(f).first;
}

inline ReducedForm identity_form(i64 d)
{
    i64 b0 = d & 1;
    return reduce(QuadForm{1, b0, detail::narrow((i128(b0) * b0 - d) / 4)});
}

inline ReducedForm opposite(ReducedForm const & f)
{
    return reduce(QuadForm{f.a(), -f.b(), f.c()});
}

/* Composition of primitive forms of the same discriminant: extended gcd on
 * (a1, a2, (b1 + b2)/2) followed by reduction. */
inline ReducedForm compose(ReducedForm const & f, ReducedForm const & g)
{
    i64 d = f.discriminant();
    if (g.discriminant() != d)
        throw disc_mismatch("cannot compose forms of discriminants " + std::to_string(d)
                            + " and " + std::to_string(g.discriminant()));
    QuadForm f1 = f.form(), f2 = g.form();
    if (f1.a > f2.a)
        std::swap(f1, f2);
    i128 a1 = f1.a, b1 = f1.b, a2 = f2.a, b2 = f2.b, c2 = f2.c;
    i128 s = (b1 + b2) / 2;
    i128 n = b2 - s;

    i128 y1, dd;
    if (a2 % a1 == 0) {
        y1 = 0;
        dd = a1;
    } else {
        auto [g1, u, v] = detail::ext_gcd(a2, a1);
        (void)v;
        y1 = u;
        dd = g1;
    }

    i128 x2, y2, d1;
    if (s % dd == 0) {
        y2 = -1;
        x2 = 0;
        d1 = dd;
    } else {
        auto [g2, xs, yd] = detail::ext_gcd(s, dd);
        x2 = xs;
        y2 = -yd;
        d1 = g2;
    }

    i128 v1 = a1 / d1;
    i128 v2 = a2 / d1;
    i128 r = detail::mod(detail::mod(y1 * y2, v1) * detail::mod(n, v1) - detail::mod(x2 * detail::mod(c2, v1), v1), v1);
    i128 b3 = b2 + 2 * v2 * r;
    i128 a3 = detail::checked_mul(v1, v2);
    i128 c3 = (detail::checked_mul(b3, b3) - d) / (4 * a3);
    return reduce(QuadForm{detail::narrow(a3), detail::narrow(b3), detail::narrow(c3)});
}

inline std::ostream & operator<<(std::ostream & o, QuadForm const & f)
{
    return o << "(" << f.a << "," << f.b << "," << f.c << ")";
}

inline std::ostream & operator<<(std::ostream & o, ReducedForm const & f)
{
    return o << f.form();
}

} // namespace classprime

template <>
struct std::hash<classprime::ReducedForm>
{
    std::size_t operator()(classprime::ReducedForm const & f) const noexcept
    {
        std::size_t h = std::hash<classprime::i64>{}(f.a());
        h ^= std::hash<classprime::i64>{}(f.b()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};
