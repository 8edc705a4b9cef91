#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "classprime/stats.hpp"

namespace classprime {

struct HeegnerPoint
{
    std::size_t class_index = 0;
    double re = 0;  // -B/(2A)
    double im = 0;  // sqrt|D|/(2A)
    i64 a = 0, b = 0, c = 0;
};

inline HeegnerPoint heegner_point(ClassGroup const & g, std::size_t class_index)
{
    auto const & f = g.element(class_index);
    double two_a = 2.0 * static_cast<double>(f.a());
    return {class_index, -static_cast<double>(f.b()) / two_a,
            std::sqrt(static_cast<double>(g.disc().abs())) / two_a, f.a(), f.b(), f.c()};
}

inline i64 max_coefficient(ReducedForm const & f)
{
    return std::max({f.a(), f.b() < 0 ? -f.b() : f.b(), f.c()});
}

/* Fraction of classes with max(|A|,|B|,|C|) < sqrt|D| * psi_value. */
inline double coefficient_bound_fraction(ClassGroup const & g, double psi_value)
{
    double bound = std::sqrt(static_cast<double>(g.disc().abs())) * psi_value;
    std::size_t n = 0;
    for (auto const & f : g.elements())
        if (static_cast<double>(max_coefficient(f)) < bound)
            ++n;
    return static_cast<double>(n) / static_cast<double>(g.h());
}

/* sqrt|D| L(1, chi_D) psi log|D| */
inline double cramer_prediction(ClassGroup const & g, double psi_value, double l_one)
{
    double ad = static_cast<double>(g.disc().abs());
    return std::sqrt(ad) * l_one * psi_value * std::log(ad);
}

/* The same scale after the class number formula sqrt|D| L = (2 pi / w) h. */
struct CramerRewrite
{
    double constant = 0;  // 2 pi / w
    double value = 0;     // constant * h * psi * log|D|
};

inline CramerRewrite cramer_via_class_number(ClassGroup const & g, double psi_value)
{
    double k = 2.0 * std::numbers::pi / unit_count(g.disc().value());
    double ad = static_cast<double>(g.disc().abs());
    return {k, k * static_cast<double>(g.h()) * psi_value * std::log(ad)};
}

struct RepulsionRow
{
    std::size_t class_index = 0;
    i64 a = 0;
    double height = 0;
    std::optional<u64> least_prime;
    bool floor_holds = true;  // least_prime >= a
};

struct RepulsionReport
{
    std::vector<RepulsionRow> rows;
    std::optional<u64> max_least_prime;
    std::optional<u64> median_least_prime;  // lower median of the primes found
    std::size_t class_with_max_a = 0;
    std::size_t class_with_max_least_prime = 0;
    bool all_floors_hold = true;
};

inline std::optional<u64> lower_median(std::vector<u64> v)
{
    if (v.empty())
        return std::nullopt;
    std::sort(v.begin(), v.end());
    return v[(v.size() - 1) / 2];
}

inline RepulsionReport repulsion_report(ClassGroup const & g, LeastPrimes const & lp)
{
    RepulsionReport rep;
    std::vector<u64> found;
    for (std::size_t i = 0; i < g.h(); ++i) {
        auto hp = heegner_point(g, i);
        RepulsionRow row{i, hp.a, hp.im, lp.prime[i], true};
        if (row.least_prime) {
            row.floor_holds = *row.least_prime >= static_cast<u64>(hp.a);
            found.push_back(*row.least_prime);
            if (!rep.max_least_prime || *row.least_prime > *rep.max_least_prime) {
                rep.max_least_prime = row.least_prime;
                rep.class_with_max_least_prime = i;
            }
        }
        rep.all_floors_hold = rep.all_floors_hold && row.floor_holds;
        if (hp.a > g.element(rep.class_with_max_a).a())
            rep.class_with_max_a = i;
        rep.rows.push_back(row);
    }
    rep.median_least_prime = lower_median(found);
    return rep;
}

} // namespace classprime
