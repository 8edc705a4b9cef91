#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "classprime/qform.hpp"

namespace classprime {

/* The form class group H_D: reduced forms in lexicographic (a, b, c) order
 * (index 0 is the principal class), plus a cyclic decomposition
 *   H_D ~ Z/n_1 x ... x Z/n_k,  n_1 | n_2 | ... | n_k,
 * and the coordinate table element -> (a_1, ..., a_k). */
class ClassGroup
{
  public:
    struct BasisElement
    {
        std::size_t index;
        std::size_t order;
    };

    Discriminant const & disc() const { return disc_; }
    std::size_t h() const { return elements_.size(); }
    std::vector<ReducedForm> const & elements() const { return elements_; }
    ReducedForm const & element(std::size_t i) const { return elements_.at(i); }
    static constexpr std::size_t identity() { return 0; }

    /* Classes recognized as non-fundamental at construction. */
    bool non_fundamental_warning() const { return !disc_.fundamental(); }

    bool has_structure() const { return structured_; }
    std::vector<BasisElement> const & basis() const { return basis_; }
    std::size_t rank() const { return basis_.size(); }
    std::vector<std::size_t> orders() const
    {
        std::vector<std::size_t> o;
        for (auto const & b : basis_)
            o.push_back(b.order);
        return o;
    }
    /* exponent of the group, i.e. n_k (1 for the trivial group) */
    std::size_t exponent() const { return basis_.empty() ? 1 : basis_.back().order; }

    std::size_t index_of(ReducedForm const & f) const
    {
        auto it = lookup_.find(f);
        if (it == lookup_.end())
            throw std::out_of_range("form is not a class of this group");
        return it->second;
    }

    bool contains(ReducedForm const & f) const { return lookup_.count(f) != 0; }

    std::span<std::uint32_t const> coords(std::size_t i) const
    {
        require_structure();
        return {coords_.data() + i * rank(), rank()};
    }

    /* row-major position of a coordinate vector (last coordinate fastest) */
    std::size_t linear(std::span<std::uint32_t const> a) const
    {
        std::size_t l = 0;
        for (std::size_t j = 0; j < basis_.size(); ++j)
            l = l * basis_[j].order + a[j];
        return l;
    }

    std::size_t element_at_linear(std::size_t l) const { return by_linear_.at(l); }
    std::size_t linear_of(std::size_t i) const { return linear(coords(i)); }

    std::size_t multiply(std::size_t i, std::size_t j) const
    {
        require_structure();
        std::size_t l = 0;
        for (std::size_t t = 0; t < rank(); ++t) {
            std::size_t n = basis_[t].order;
            l = l * n + (coords_[i * rank() + t] + coords_[j * rank() + t]) % n;
        }
        return by_linear_[l];
    }

    std::size_t power(std::size_t i, std::int64_t e) const
    {
        require_structure();
        std::size_t l = 0;
        for (std::size_t t = 0; t < rank(); ++t) {
            std::int64_t n = static_cast<std::int64_t>(basis_[t].order);
            std::int64_t x = static_cast<std::int64_t>(detail::mod(i128(coords_[i * rank() + t]) * e, n));
            l = l * basis_[t].order + static_cast<std::size_t>(x);
        }
        return by_linear_[l];
    }

    std::size_t inverse(std::size_t i) const { return power(i, -1); }

    /* exp(2 pi i r / exponent()) */
    std::complex<double> root_of_unity(std::size_t r) const { return roots_.at(r); }

    friend ClassGroup enumerate_reduced_forms(Discriminant const & d, bool require_fundamental);
    friend ClassGroup group_structure(ClassGroup g);

  private:
    Discriminant disc_;
    std::vector<ReducedForm> elements_;
    std::unordered_map<ReducedForm, std::size_t> lookup_;

    bool structured_ = false;
    std::vector<BasisElement> basis_;
    std::vector<std::uint32_t> coords_;
    std::vector<std::size_t> by_linear_;
    std::vector<std::complex<double>> roots_;

    void require_structure() const
    {
        if (!structured_)
            throw std::logic_error("group_structure() has not been computed");
    }
};

/* All primitive reduced forms of discriminant d < 0.  The loop bound is
 * a <= sqrt(|D|/3), which follows from |b| <= a <= c. */
inline ClassGroup enumerate_reduced_forms(Discriminant const & d, bool require_fundamental = false)
{
    if (d.value() >= 0)
        throw not_a_discriminant("class groups are computed for negative discriminants only, got "
                                 + std::to_string(d.value()));
    if (require_fundamental && !d.fundamental())
        throw not_fundamental(std::to_string(d.value()) + " is not a fundamental discriminant");
    ClassGroup g;
    g.disc_ = d;
    i64 D = d.value();
    i64 amax = static_cast<i64>(detail::isqrt(d.abs() / 3));
    for (i64 a = 1; a <= amax; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            if (((b - D) & 1) != 0)
                continue;
            i128 num = i128(b) * b - D;
            if (num % (4 * i128(a)) != 0)
                continue;
            i64 c = static_cast<i64>(num / (4 * i128(a)));
            if (c < a || (c == a && b < 0))
                continue;
            if (detail::gcd(detail::gcd(a, b), c) != 1)
                continue;
            g.elements_.push_back(reduce(QuadForm{a, b, c}));
        }
    }
    std::sort(g.elements_.begin(), g.elements_.end());
    for (std::size_t i = 0; i < g.elements_.size(); ++i)
        g.lookup_.emplace(g.elements_[i], i);
    return g;
}

namespace detail {

using Matrix = std::vector<std::vector<i128>>;

/* Smith normal form of a square nonsingular integer matrix.  Only column
 * operations are recorded: on return diag = P * A * Q for some unimodular P,
 * with q and q_inv holding Q and its inverse. */
inline std::vector<i128> smith_diagonal(Matrix a, Matrix & q, Matrix & q_inv)
{
    std::size_t r = a.size();
    q.assign(r, std::vector<i128>(r, 0));
    q_inv.assign(r, std::vector<i128>(r, 0));
    for (std::size_t i = 0; i < r; ++i)
        q[i][i] = q_inv[i][i] = 1;

    auto swap_cols = [&](std::size_t x, std::size_t y) {
        if (x == y)
            return;
        for (std::size_t i = 0; i < r; ++i) {
            std::swap(a[i][x], a[i][y]);
            std::swap(q[i][x], q[i][y]);
        }
        std::swap(q_inv[x], q_inv[y]);
    };
    // col_y -= k * col_x
    auto sub_col = [&](std::size_t y, std::size_t x, i128 k) {
        if (k == 0)
            return;
        for (std::size_t i = 0; i < r; ++i) {
            a[i][y] = checked_add(a[i][y], -checked_mul(k, a[i][x]));
            q[i][y] = checked_add(q[i][y], -checked_mul(k, q[i][x]));
        }
        for (std::size_t j = 0; j < r; ++j)
            q_inv[x][j] = checked_add(q_inv[x][j], checked_mul(k, q_inv[y][j]));
    };
    auto sub_row = [&](std::size_t y, std::size_t x, i128 k) {
        if (k == 0)
            return;
        for (std::size_t j = 0; j < r; ++j)
            a[y][j] = checked_add(a[y][j], -checked_mul(k, a[x][j]));
    };
    auto abs128 = [](i128 v) { return v < 0 ? -v : v; };

    for (std::size_t t = 0; t < r; ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing block becomes the pivot
            std::size_t pi = r, pj = r;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < r; ++j)
                    if (a[i][j] != 0 && (pi == r || abs128(a[i][j]) < abs128(a[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == r)
                throw std::logic_error("relation matrix is singular");
            std::swap(a[t], a[pi]);
            swap_cols(t, pj);

            bool clean = true;
            for (std::size_t i = t + 1; i < r; ++i) {
                sub_row(i, t, a[i][t] / a[t][t]);
                if (a[i][t] != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < r; ++j) {
                sub_col(j, t, a[t][j] / a[t][t]);
                if (a[t][j] != 0)
                    clean = false;
            }
            if (!clean)
                continue;
            // pivot must divide the whole trailing block
            bool divides = true;
            for (std::size_t i = t + 1; i < r && divides; ++i)
                for (std::size_t j = t + 1; j < r; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        for (std::size_t c = 0; c < r; ++c)
                            a[t][c] += a[i][c];
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        if (a[t][t] < 0)
            for (std::size_t j = 0; j < r; ++j)
                a[t][j] = -a[t][j];
    }
    std::vector<i128> diag(r);
    for (std::size_t i = 0; i < r; ++i)
        diag[i] = a[i][i];
    return diag;
}

} // namespace detail

/* Cyclic decomposition.  The group is grown one generator at a time:
 * for the first class x outside the current subgroup H, the least m with
 * x^m in H gives a relation, and H <- union of x^i H.  The resulting
 * triangular relation matrix is brought to Smith normal form, whose
 * nontrivial diagonal entries are the invariant factors. */
inline ClassGroup group_structure(ClassGroup g)
{
    std::size_t h = g.h();
    if (h == 0)
        throw std::logic_error("empty class group");
    auto mul = [&g](std::size_t i, std::size_t j) {
        return g.index_of(compose(g.elements_[i], g.elements_[j]));
    };

    constexpr std::size_t none = SIZE_MAX;
    std::vector<std::size_t> parent(h, none), step(h, 0), level(h, none);
    std::vector<bool> in_h(h, false);
    std::vector<std::size_t> members{0};
    in_h[0] = true;

    std::vector<std::size_t> gens;
    std::vector<std::size_t> rel_order;
    std::vector<std::size_t> rel_target;  // the member x^m lands on

    for (std::size_t cand = 1; members.size() < h; ++cand) {
        if (in_h[cand])
            continue;
        std::vector<std::size_t> powers{0, cand};
        std::size_t cur = cand;
        while (!in_h[cur]) {
            cur = mul(cur, cand);
            powers.push_back(cur);
        }
        std::size_t m = powers.size() - 1;
        std::size_t j = gens.size();
        gens.push_back(cand);
        rel_order.push_back(m);
        rel_target.push_back(cur);
        std::size_t old = members.size();
        for (std::size_t i = 1; i < m; ++i) {
            for (std::size_t t = 0; t < old; ++t) {
                std::size_t e = mul(powers[i], members[t]);
                in_h[e] = true;
                parent[e] = members[t];
                step[e] = i;
                level[e] = j;
                members.push_back(e);
            }
        }
    }

    std::size_t r = gens.size();
    // exponents of an element with respect to gens (0 <= x_j < m_j)
    auto mixed = [&](std::size_t e) {
        std::vector<i128> x(r, 0);
        while (e != 0) {
            x[level[e]] = static_cast<i128>(step[e]);
            e = parent[e];
        }
        return x;
    };

    std::vector<i128> diag;
    detail::Matrix q, q_inv;
    if (r > 0) {
        detail::Matrix rel(r, std::vector<i128>(r, 0));
        for (std::size_t j = 0; j < r; ++j) {
            auto x = mixed(rel_target[j]);
            for (std::size_t i = 0; i < r; ++i)
                rel[j][i] = -x[i];
            rel[j][j] += static_cast<i128>(rel_order[j]);
        }
        diag = detail::smith_diagonal(rel, q, q_inv);
    }

    auto pow_elem = [&](std::size_t e, i128 k) {
        k = detail::mod(k, static_cast<i128>(h));
        std::size_t result = 0;
        std::size_t base = e;
        while (k > 0) {
            if (k & 1)
                result = mul(result, base);
            base = mul(base, base);
            k >>= 1;
        }
        return result;
    };

    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < r; ++k)
        if (diag[k] > 1)
            keep.push_back(k);

    g.basis_.clear();
    for (std::size_t k : keep) {
        std::size_t e = 0;
        for (std::size_t i = 0; i < r; ++i)
            e = mul(e, pow_elem(gens[i], q_inv[k][i]));
        g.basis_.push_back({e, static_cast<std::size_t>(diag[k])});
    }

    std::size_t rank = keep.size();
    g.coords_.assign(h * rank, 0);
    g.by_linear_.assign(h, none);
    for (std::size_t e = 0; e < h; ++e) {
        auto x = mixed(e);
        for (std::size_t t = 0; t < rank; ++t) {
            std::size_t k = keep[t];
            i128 s = 0;
            for (std::size_t i = 0; i < r; ++i)
                s += x[i] * q[i][k];
            g.coords_[e * rank + t] = static_cast<std::uint32_t>(detail::mod(s, diag[k]));
        }
    }
    g.structured_ = true;
    for (std::size_t e = 0; e < h; ++e) {
        std::size_t l = g.linear(g.coords(e));
        if (l >= h || g.by_linear_[l] != none)
            throw std::logic_error("coordinate map is not a bijection");
        g.by_linear_[l] = e;
    }

    std::size_t n = g.exponent();
    g.roots_.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        double angle = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n);
        g.roots_[t] = {std::cos(angle), std::sin(angle)};
    }
    return g;
}

inline ClassGroup build_class_group(Discriminant const & d, bool require_fundamental = false)
{
    return group_structure(enumerate_reduced_forms(d, require_fundamental));
}

inline ClassGroup build_class_group(i64 d, bool require_fundamental = false)
{
    return build_class_group(validate_discriminant(d), require_fundamental);
}

/* chi_m(A) = exp(2 pi i sum_j m_j a_j / n_j) */
struct Character
{
    std::vector<std::uint32_t> exponents;

    bool is_trivial() const
    {
        return std::all_of(exponents.begin(), exponents.end(), [](auto m) { return m == 0; });
    }

    /* the phase as an exact residue mod the group exponent */
    std::size_t phase(ClassGroup const & g, std::size_t element) const
    {
        std::size_t n = g.exponent();
        auto a = g.coords(element);
        std::size_t r = 0;
        for (std::size_t j = 0; j < exponents.size(); ++j) {
            std::size_t nj = g.basis()[j].order;
            r = (r + static_cast<std::size_t>((u128(exponents[j]) * a[j] % nj) * (n / nj))) % n;
        }
        return r;
    }

    std::complex<double> operator()(ClassGroup const & g, std::size_t element) const
    {
        return g.root_of_unity(phase(g, element));
    }
};

/* All h characters; the t-th one has exponent vector equal to the coordinate
 * vector at linear position t, so index 0 is the trivial character. */
inline std::vector<Character> characters(ClassGroup const & g)
{
    std::vector<Character> out;
    out.reserve(g.h());
    for (std::size_t t = 0; t < g.h(); ++t) {
        auto a = g.coords(g.element_at_linear(t));
        out.push_back(Character{{a.begin(), a.end()}});
    }
    return out;
}

/* Class of the ideal with Z-basis <a, (-b + sqrt D)/2>, i.e. of the form
 * (a, b, (b^2 - D)/(4a)). */
inline std::size_t ideal_class_of(i64 a, i64 b, ClassGroup const & g)
{
    QuadForm f = form_with_disc(a, b, g.disc().value());
    ReducedForm r = reduce(f);
    if (!g.contains(r))
        throw invalid_ideal_basis("ideal basis does not give a primitive form");
    return g.index_of(r);
}

} // namespace classprime
