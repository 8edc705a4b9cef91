#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "classprime/arith.hpp"

namespace classprime {

enum class WeightKind { bump, indicator };

inline char const * to_string(WeightKind k)
{
    return k == WeightKind::bump ? "bump" : "indicator";
}

namespace detail {

inline double bump_shape(double x)
{
    if (x <= 1.0 || x >= 2.0)
        return 0.0;
    return std::exp(-1.0 / ((x - 1.0) * (2.0 - x)));
}

inline double integrate(auto && f, double lo, double hi)
{
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(f, lo, hi, 12, 1e-13);
}

inline double bump_normalizer()
{
    static double const c = 1.0 / integrate(bump_shape, 1.0, 2.0);
    return c;
}

} // namespace detail

/* Weight supported in [1, 2] with unit integral.  The indicator of [1, 2)
 * is a non-smooth diagnostic mode whose sums are exact prime-ideal counts. */
struct Weight
{
    WeightKind kind = WeightKind::bump;
    double normalization = 1.0;

    static Weight bump() { return {WeightKind::bump, detail::bump_normalizer()}; }
    static Weight indicator() { return {WeightKind::indicator, 1.0}; }
    static Weight of(WeightKind k) { return k == WeightKind::bump ? bump() : indicator(); }

    double operator()(double x) const
    {
        if (kind == WeightKind::indicator)
            return (x >= 1.0 && x < 2.0) ? 1.0 : 0.0;
        return normalization * detail::bump_shape(x);
    }
};

inline double weight_eval(Weight const & w, double x)
{
    return w(x);
}

/* int_0^inf w(x) x^(s-1) dx */
inline std::complex<double> mellin(Weight const & w, std::complex<double> s)
{
    if (w.kind == WeightKind::indicator) {
        if (std::abs(s) < 1e-300)
            return std::log(2.0);
        return (std::pow(std::complex<double>(2.0), s) - 1.0) / s;
    }
    double sr = s.real() - 1.0, si = s.imag();
    auto re = [&](double x) { return w(x) * std::exp(sr * std::log(x)) * std::cos(si * std::log(x)); };
    auto im = [&](double x) { return w(x) * std::exp(sr * std::log(x)) * std::sin(si * std::log(x)); };
    return {detail::integrate(re, 1.0, 2.0), detail::integrate(im, 1.0, 2.0)};
}

/* psi_A(w_T) = sum over prime-power ideals n in A of Lambda(n) w(N(n)/T),
 * indexed like g.elements(). */
inline std::vector<double> psi_by_class(ClassGroup const & g, double T, Weight const & w,
                                        u64 cap = default_sieve_cap)
{
    if (!(T >= 2.0))
        throw std::invalid_argument("T must be >= 2");
    std::vector<double> psi(g.h(), 0.0);
    u64 top = static_cast<u64>(std::floor(2.0 * T));
    u64 small = detail::isqrt(top);
    u64 low = static_cast<u64>(std::ceil(T));

    auto visit = [&](u64 p) {
        std::optional<PrimeClassification> pc;
        // split/ramified ideals have norms p^k, inert ones p^(2k)
        int chi = kronecker(g.disc().value(), static_cast<i64>(p));
        unsigned step = chi == -1 ? 2 : 1;
        u128 norm = p;
        if (step == 2)
            norm *= p;
        for (unsigned k = 1; norm <= top; ++k) {
            double x = static_cast<double>(norm) / T;
            double wx = w(x);
            if (wx != 0.0) {
                if (!pc)
                    pc = classify_prime(p, g);
                for (auto const & ideal : prime_power_ideals(*pc, k, g))
                    psi[ideal.class_index] += ideal.lambda * wx;
            }
            norm *= p;
            if (step == 2)
                norm *= p;
        }
    };
    for_each_prime(2, small, visit, cap);
    for_each_prime(std::max(low, small + 1), top, visit, cap);
    return psi;
}

/* psi_chi = sum_A chi(A) psi_A, indexed like characters(g).  Computed as a
 * separable DFT over the coordinate grid. */
inline std::vector<std::complex<double>> psi_by_char(ClassGroup const & g,
                                                     std::vector<double> const & psi_a)
{
    std::size_t h = g.h();
    std::vector<std::complex<double>> grid(h);
    for (std::size_t e = 0; e < h; ++e)
        grid[g.linear_of(e)] = psi_a.at(e);
    std::size_t n_exp = g.exponent();
    std::size_t stride = h;
    std::vector<std::complex<double>> line;
    for (std::size_t j = 0; j < g.rank(); ++j) {
        std::size_t n = g.basis()[j].order;
        stride /= n;
        std::size_t unit = n_exp / n;
        line.resize(n);
        for (std::size_t base = 0; base < h; ++base) {
            if ((base / stride) % n != 0)
                continue;
            for (std::size_t m = 0; m < n; ++m) {
                std::complex<double> s = 0;
                for (std::size_t a = 0; a < n; ++a)
                    s += g.root_of_unity((m * a % n) * unit) * grid[base + a * stride];
                line[m] = s;
            }
            for (std::size_t m = 0; m < n; ++m)
                grid[base + m * stride] = line[m];
        }
    }
    return grid;
}

/* psi_A = (1/h) sum_chi conj(chi(A)) psi_chi, indexed like g.elements(). */
inline std::vector<std::complex<double>> psi_from_chars(ClassGroup const & g,
                                                        std::vector<std::complex<double>> const & psi_chi)
{
    std::size_t h = g.h();
    std::vector<std::complex<double>> grid(psi_chi.begin(), psi_chi.end());
    std::size_t n_exp = g.exponent();
    std::size_t stride = h;
    std::vector<std::complex<double>> line;
    for (std::size_t j = 0; j < g.rank(); ++j) {
        std::size_t n = g.basis()[j].order;
        stride /= n;
        std::size_t unit = n_exp / n;
        line.resize(n);
        for (std::size_t base = 0; base < h; ++base) {
            if ((base / stride) % n != 0)
                continue;
            for (std::size_t a = 0; a < n; ++a) {
                std::complex<double> s = 0;
                for (std::size_t m = 0; m < n; ++m)
                    s += std::conj(g.root_of_unity((m * a % n) * unit)) * grid[base + m * stride];
                line[a] = s;
            }
            for (std::size_t a = 0; a < n; ++a)
                grid[base + a * stride] = line[a];
        }
    }
    std::vector<std::complex<double>> out(h);
    for (std::size_t e = 0; e < h; ++e)
        out[e] = grid[g.linear_of(e)] / static_cast<double>(h);
    return out;
}

inline constexpr double identity_rel_tol = 1e-9;

struct VarianceResult
{
    double definitional = 0;  // sum_A |psi_A - psi/h|^2
    double dual = 0;          // (1/h) sum_{chi != 1} |psi_chi|^2
    double rel_diff = 0;
};

inline double relative_difference(double x, double y, double floor = 0.0)
{
    double scale = std::max({std::abs(x), std::abs(y), floor});
    return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
}

/* Both sides of the diagonal identity; throws identity_mismatch if they
 * differ by more than identity_rel_tol. */
inline VarianceResult variance_from(ClassGroup const & g, std::vector<double> const & psi_a,
                                    std::vector<std::complex<double>> const & psi_chi)
{
    double h = static_cast<double>(g.h());
    double total = 0, sq = 0;
    for (double v : psi_a) {
        total += v;
        sq += v * v;
    }
    VarianceResult r;
    for (double v : psi_a) {
        double dev = v - total / h;
        r.definitional += dev * dev;
    }
    for (std::size_t t = 1; t < psi_chi.size(); ++t)
        r.dual += std::norm(psi_chi[t]);
    r.dual /= h;
    // rounding in psi_A - psi/h is relative to the psi_A themselves
    r.rel_diff = relative_difference(r.definitional, r.dual, 1e-13 * sq);
    if (r.rel_diff > identity_rel_tol)
        throw identity_mismatch("variance identity violated: definitional "
                                + std::to_string(r.definitional) + " vs character side "
                                + std::to_string(r.dual));
    return r;
}

/* sum over prime-power norms N <= 2T of Lambda * phi_T(N), phi_T(x) = w(1/(xT))/x.
 * Every term vanishes since 1/(N T) < 1 lies outside the support. */
inline double reflected_weight_sum(ClassGroup const & g, double T, Weight const & w)
{
    double s = 0;
    u64 top = static_cast<u64>(std::floor(2.0 * T));
    for_each_prime(2, top, [&](u64 p) {
        int chi = kronecker(g.disc().value(), static_cast<i64>(p));
        u64 base = chi == -1 ? p * p : p;
        double lp = std::log(static_cast<double>(p)) * (chi == -1 ? 2 : 1);
        for (u128 n = base; n <= top; n *= base) {
            double x = static_cast<double>(n);
            s += lp * w(1.0 / (x * T)) / x;
        }
    });
    return s;
}

struct PsiReport
{
    i64 disc = 0;
    double T = 0;
    WeightKind weight = WeightKind::bump;
    std::vector<double> psi_by_class;
    std::vector<std::complex<double>> psi_by_char;
    double psi_total = 0;
    double variance = 0;       // definitional
    double variance_dual = 0;  // character side
    double variance_rel_diff = 0;
    double delta_main_term = 0;  // psi_total - T int w
};

inline PsiReport psi_report(ClassGroup const & g, double T, Weight const & w,
                            u64 cap = default_sieve_cap)
{
    PsiReport r;
    r.disc = g.disc().value();
    r.T = T;
    r.weight = w.kind;
    r.psi_by_class = psi_by_class(g, T, w, cap);
    r.psi_by_char = psi_by_char(g, r.psi_by_class);
    for (double v : r.psi_by_class)
        r.psi_total += v;
    auto v = variance_from(g, r.psi_by_class, r.psi_by_char);
    r.variance = v.definitional;
    r.variance_dual = v.dual;
    r.variance_rel_diff = v.rel_diff;
    r.delta_main_term = r.psi_total - T;
    return r;
}

inline double variance(ClassGroup const & g, double T, Weight const & w)
{
    return psi_report(g, T, w).variance;
}

/* sum over classes with psi_A = 0 of (psi/h)^2; a term-by-term lower bound
 * for the definitional variance. */
inline double empty_class_lower_bound(PsiReport const & r)
{
    double mean = r.psi_total / static_cast<double>(r.psi_by_class.size());
    double s = 0;
    for (double v : r.psi_by_class)
        if (v == 0.0)
            s += mean * mean;
    return s;
}

struct LeastPrimes
{
    double cap = 0;  // primes p with 1 < p < cap were examined
    std::vector<std::optional<u64>> prime;       // least rational prime represented by A
    std::vector<bool> ramified;                  // that prime divides D
    std::vector<std::optional<u64>> ideal_norm;  // least norm of a prime ideal in A
    bool truncated = false;                      // sweep clamped by the sieve cap

    bool complete() const
    {
        return std::all_of(prime.begin(), prime.end(), [](auto const & p) { return p.has_value(); });
    }
};

inline u64 largest_below(double x)
{
    if (x <= 2.0)
        return 1;
    double f = std::ceil(x) - 1.0;
    return static_cast<u64>(f);
}

/* One increasing sweep over primes below the cap, stopping when every class
 * has its least prime. */
inline LeastPrimes least_primes(ClassGroup const & g, double x_cap, u64 sieve_cap = default_sieve_cap)
{
    if (!(x_cap >= 2.0))
        throw std::invalid_argument("X cap must be >= 2");
    LeastPrimes lp;
    lp.cap = x_cap;
    lp.prime.assign(g.h(), std::nullopt);
    lp.ramified.assign(g.h(), false);
    lp.ideal_norm.assign(g.h(), std::nullopt);
    u64 top = largest_below(x_cap);
    if (top > sieve_cap) {
        top = sieve_cap;
        lp.truncated = true;
    }
    std::size_t missing = g.h();
    for_each_prime(2, top, [&](u64 p) {
        auto pc = classify_prime(p, g);
        if (pc.kind == SplitKind::inert) {
            u128 n = u128(p) * p;
            auto & slot = lp.ideal_norm[ClassGroup::identity()];
            if (n <= top && (!slot || n < *slot))
                slot = static_cast<u64>(n);
            return true;
        }
        for (std::size_t c : pc.classes) {
            if (!lp.prime[c]) {
                lp.prime[c] = p;
                lp.ramified[c] = pc.kind == SplitKind::ramified;
                --missing;
            }
            if (!lp.ideal_norm[c] || p < *lp.ideal_norm[c])
                lp.ideal_norm[c] = p;
        }
        return missing > 0;
    }, sieve_cap);
    return lp;
}

/* R(D, X): classes representing no prime p with 1 < p < X.  X must not
 * exceed the cap the table was computed with. */
inline std::size_t count_exceptional(LeastPrimes const & lp, double x)
{
    if (x > lp.cap)
        throw std::invalid_argument("threshold beyond the least-prime cap");
    std::size_t r = 0;
    for (auto const & p : lp.prime)
        if (!p || static_cast<double>(*p) >= x)
            ++r;
    return r;
}

/* R(K, T): classes containing no prime ideal with 1 < N < T. */
inline std::size_t count_exceptional_ideals(LeastPrimes const & lp, double x)
{
    if (x > lp.cap)
        throw std::invalid_argument("threshold beyond the least-prime cap");
    std::size_t r = 0;
    for (auto const & n : lp.ideal_norm)
        if (!n || static_cast<double>(*n) >= x)
            ++r;
    return r;
}

inline std::size_t exceptional_count(ClassGroup const & g, double x)
{
    return count_exceptional(least_primes(g, x), x);
}

} // namespace classprime
