#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "classprime/cli.hpp"

namespace classprime::acceptance {

struct Outcome
{
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

/* Discriminants spread over [-10^5, -10^3]: the first fundamental D at or
 * below -1000 - 4000 k, k = 0..24. */
inline std::vector<i64> sample_discriminants()
{
    std::vector<i64> out;
    for (i64 k = 0; k < 25; ++k) {
        i64 d = -1000 - 4000 * k;
        while (true) {
            i64 r = static_cast<i64>(detail::mod(d, 4));
            if ((r == 0 || r == 1) && validate_discriminant(d).fundamental())
                break;
            --d;
        }
        out.push_back(d);
    }
    return out;
}

/* least prime represented by f, found by searching the representation box
 * directly (no ideal or splitting machinery) */
inline std::optional<u64> brute_least_prime(ReducedForm const & f, u64 ad, u64 limit)
{
    std::optional<u64> best;
    for_each_prime(2, limit, [&](u64 p) {
        i64 ymax = static_cast<i64>(detail::isqrt(static_cast<u64>(4 * u128(f.a()) * p / ad)));
        i64 xmax = static_cast<i64>(detail::isqrt(static_cast<u64>(4 * u128(f.c()) * p / ad)));
        for (i64 y = -ymax; y <= ymax; ++y)
            for (i64 x = -xmax; x <= xmax; ++x)
                if (evaluate(f.form(), x, y) == i128(p)) {
                    best = p;
                    return false;
                }
        return true;
    });
    return best;
}

using Clock = std::chrono::steady_clock;

inline double since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline Outcome class_number_cross_check()
{
    Outcome o{1, "class number = round(w sqrt|D| L(1,chi)/(2 pi)), -10^4 < D < -3, terms = 100|D|", false, {}, 0};
    auto t0 = Clock::now();
    std::size_t n = 0, bad = 0;
    double worst = 0;
    i64 first_bad = 0;
    for (i64 d : cli::fundamental_range(-9999, -4)) {
        auto disc = validate_discriminant(d);
        auto g = enumerate_reduced_forms(disc);
        auto l = l_one_chi(disc, 100 * disc.abs());
        double est = class_number_from_l(disc, l.value);
        worst = std::max(worst, std::abs(est - static_cast<double>(g.h())));
        if (std::llround(est) != static_cast<long long>(g.h())) {
            if (!bad)
                first_bad = d;
            ++bad;
        }
        ++n;
    }
    o.seconds = since(t0);
    o.passed = bad == 0 && o.seconds < 60.0;
    std::ostringstream s;
    s << n << " discriminants, " << bad << " disagreements";
    if (bad)
        s << " (first D=" << first_bad << ")";
    s << ", max |estimate - h| = " << cli::fmt(worst);
    o.detail = s.str();
    return o;
}

inline Outcome dirichlet_formula()
{
    Outcome o{2, "representation count = w_D sum_{d|n} chi_D(d) for n <= 5000; max split r(p,D) = 4", false, {}, 0};
    auto t0 = Clock::now();
    bool good = true;
    std::ostringstream s;
    for (i64 d : {-3, -4, -8, -23, -47, -71, -163}) {
        auto g = build_class_group(d);
        auto c = cli::dirichlet_check(g, 5000);
        if (!c.ok) {
            good = false;
            s << "D=" << d << " mismatch at n=" << *c.first_mismatch << "; ";
        }
        // for D < -4 the maximum over primes p not dividing D must be exactly 4
        if (d < -4 && c.max_r_unramified_prime != 4) {
            good = false;
            s << "D=" << d << " max r(p) = " << c.max_r_unramified_prime << "; ";
        }
    }
    o.seconds = since(t0);
    o.passed = good && o.seconds < 60.0;
    o.detail = good ? "7 discriminants x 5000 n exact" : s.str();
    return o;
}

struct PsiCase
{
    i64 d;
    double T;
    WeightKind w;
};

inline std::vector<PsiCase> identity_cases()
{
    std::vector<PsiCase> out;
    for (i64 d : {-23, -47, -10007})
        for (double T : {1e3, 1e4, 1e5})
            for (auto w : {WeightKind::bump, WeightKind::indicator})
                out.push_back({d, T, w});
    return out;
}

inline Outcome variance_identity()
{
    Outcome o{3, "definitional variance = (1/h) sum_{chi != 1} |psi_chi|^2 to 1e-9 relative", false, {}, 0};
    auto t0 = Clock::now();
    double worst = 0;
    bool good = true;
    for (auto const & c : identity_cases()) {
        auto g = build_class_group(c.d);
        auto psi_a = psi_by_class(g, c.T, Weight::of(c.w));
        auto psi_chi = psi_by_char(g, psi_a);
        try {
            auto v = variance_from(g, psi_a, psi_chi);
            worst = std::max(worst, v.rel_diff);
        } catch (identity_mismatch const &) {
            good = false;
        }
    }
    o.seconds = since(t0);
    o.passed = good && worst <= 1e-9 && o.seconds < 120.0;
    o.detail = "18 cases, worst relative difference " + cli::fmt(worst);
    return o;
}

inline Outcome fourier_round_trip()
{
    Outcome o{4, "psi_A recovered from psi_chi to 1e-9 relative", false, {}, 0};
    auto t0 = Clock::now();
    double worst = 0;
    for (auto const & c : identity_cases()) {
        auto g = build_class_group(c.d);
        auto psi_a = psi_by_class(g, c.T, Weight::of(c.w));
        auto back = psi_from_chars(g, psi_by_char(g, psi_a));
        double scale = 0, err = 0;
        for (std::size_t i = 0; i < psi_a.size(); ++i) {
            scale = std::max(scale, std::abs(psi_a[i]));
            err = std::max(err, std::abs(back[i] - psi_a[i]));
        }
        worst = std::max(worst, scale > 0 ? err / scale : err);
    }
    o.seconds = since(t0);
    o.passed = worst <= 1e-9;
    o.detail = "18 cases, worst max-norm relative error " + cli::fmt(worst);
    return o;
}

inline Outcome main_term()
{
    Outcome o{5, "|psi(w_T)/T - 1| <= 0.05 for D=-23, bump weight, T=10^6", false, {}, 0};
    auto t0 = Clock::now();
    auto g = build_class_group(-23);
    auto psi = psi_by_class(g, 1e6, Weight::bump());
    double total = 0;
    for (double v : psi)
        total += v;
    double dev = std::abs(total / 1e6 - 1.0);
    o.seconds = since(t0);
    o.passed = dev <= 0.05 && o.seconds < 30.0;
    o.detail = "psi/T - 1 = " + cli::fmt(total / 1e6 - 1.0);
    return o;
}

struct SampleData
{
    i64 d = 0;
    ClassGroup g;
    LeastPrimes lp;
    double log_d = 0;
};

inline std::vector<SampleData> const & sample_data()
{
    static std::vector<SampleData> const data = [] {
        std::vector<SampleData> out;
        for (i64 d : sample_discriminants()) {
            SampleData s;
            s.d = d;
            s.g = build_class_group(d, true);
            s.log_d = std::log(static_cast<double>(-d));
            double h = static_cast<double>(s.g.h());
            s.lp = least_primes(s.g, 100.0 * h * h * s.log_d * s.log_d);
            out.push_back(std::move(s));
        }
        return out;
    }();
    return data;
}

inline Outcome grh_scale_variance()
{
    Outcome o{6, "Var/(T log^2|D|) <= 10 at T = h^2 log^2|D|, bump weight, 25 D in [-10^5, -10^3]", false, {}, 0};
    auto t0 = Clock::now();
    double worst = 0;
    i64 worst_d = 0;
    std::size_t n = 0;
    for (auto const & s : sample_data()) {
        double h = static_cast<double>(s.g.h());
        double T = std::max(2.0, h * h * s.log_d * s.log_d);
        auto r = psi_report(s.g, T, Weight::bump());
        double ratio = r.variance / (T * s.log_d * s.log_d);
        if (ratio > worst) {
            worst = ratio;
            worst_d = s.d;
        }
        ++n;
    }
    o.seconds = since(t0);
    o.passed = n >= 20 && worst <= 10.0 && o.seconds < 300.0;
    o.detail = std::to_string(n) + " samples, max ratio " + cli::fmt(worst) + " at D="
               + std::to_string(worst_d);
    return o;
}

inline Outcome least_prime_table()
{
    Outcome o{7, "D=-23: p = 2, 2, 23 for (2,1,3), (2,-1,3), (1,1,6); R(-23,3)=1; R(-23,24)=0", false, {}, 0};
    auto t0 = Clock::now();
    auto g = build_class_group(-23);
    auto lp = least_primes(g, 1000);
    bool good = true;
    std::ostringstream s;
    struct Want
    {
        QuadForm f;
        u64 p;
    };
    for (auto const & want : {Want{{2, 1, 3}, 2}, Want{{2, -1, 3}, 2}, Want{{1, 1, 6}, 23}}) {
        std::size_t i = g.index_of(reduce(want.f));
        auto oracle = brute_least_prime(g.element(i), 23, 1000);
        bool row = lp.prime[i] == want.p && oracle == want.p;
        good = good && row;
        s << want.f << "->" << cli::fmt_opt(lp.prime[i]) << " (oracle " << cli::fmt_opt(oracle) << ") ";
    }
    std::size_t r3 = exceptional_count(g, 3), r24 = exceptional_count(g, 24);
    good = good && r3 == 1 && r24 == 0;
    s << "R(3)=" << r3 << " R(24)=" << r24;
    o.seconds = since(t0);
    o.passed = good;
    o.detail = s.str();
    return o;
}

inline Outcome exceptional_decay()
{
    Outcome o{8, "R(D, h log^2.1|D|) <= 0.1 h and R(D, 100 h^2 log^2|D|) = 0 on the sample", false, {}, 0};
    auto t0 = Clock::now();
    std::ostringstream s;
    bool good = true;
    std::size_t worst_r = 0;
    double worst_frac = 0;
    for (auto const & sd : sample_data()) {
        double h = static_cast<double>(sd.g.h());
        double x1 = h * std::pow(sd.log_d, 2.1);
        double x2 = 100.0 * h * h * sd.log_d * sd.log_d;
        std::size_t r1 = count_exceptional(sd.lp, x1);
        std::size_t r2 = count_exceptional(sd.lp, x2);
        worst_r = std::max(worst_r, r2);
        worst_frac = std::max(worst_frac, static_cast<double>(r1) / h);
        if (static_cast<double>(r1) > 0.1 * h || r2 != 0) {
            good = false;
            s << "D=" << sd.d << " h=" << sd.g.h() << " X1=" << cli::fmt(x1) << " R1=" << r1
              << " R2=" << r2 << " (late classes:";
            for (std::size_t i = 0; i < sd.g.h(); ++i)
                if (!sd.lp.prime[i] || static_cast<double>(*sd.lp.prime[i]) >= x1)
                    s << ' ' << sd.g.element(i) << "->" << cli::fmt_opt(sd.lp.prime[i]);
            s << "); ";
        }
    }
    o.seconds = since(t0);
    o.passed = good && o.seconds < 600.0;
    o.detail = good ? "max R1/h = " + cli::fmt(worst_frac) + ", max R2 = " + std::to_string(worst_r)
                    : s.str();
    return o;
}

inline Outcome structural_floor()
{
    Outcome o{9, "p_A >= A and 4AC >= |D| for every tested class", false, {}, 0};
    auto t0 = Clock::now();
    std::size_t classes = 0, violations = 0;
    auto check = [&](ClassGroup const & g, LeastPrimes const & lp) {
        for (std::size_t i = 0; i < g.h(); ++i) {
            auto const & f = g.element(i);
            ++classes;
            if (4 * i128(f.a()) * f.c() < i128(g.disc().abs()))
                ++violations;
            if (lp.prime[i] && *lp.prime[i] < static_cast<u64>(f.a()))
                ++violations;
        }
    };
    for (auto const & s : sample_data())
        check(s.g, s.lp);
    for (i64 d : {-3, -4, -8, -23, -47, -71, -84, -163, -10007}) {
        auto g = build_class_group(d);
        double lg = std::log(static_cast<double>(-d));
        double h = static_cast<double>(g.h());
        check(g, least_primes(g, std::max(100.0, 100.0 * h * h * lg * lg)));
    }
    o.seconds = since(t0);
    o.passed = violations == 0;
    o.detail = std::to_string(classes) + " classes, " + std::to_string(violations) + " violations";
    return o;
}

inline Outcome determinism()
{
    Outcome o{10, "scan over [-2000, -3] is byte-identical for 1 and 4 threads", false, {}, 0};
    auto t0 = Clock::now();
    cli::RunConfig cfg;
    cfg.range_lo = -2000;
    cfg.range_hi = -3;
    std::ostringstream a, b, log;
    cfg.threads = 1;
    cli::cmd_scan(cfg, a, log);
    cfg.threads = 4;
    cli::cmd_scan(cfg, b, log);
    o.seconds = since(t0);
    std::size_t rows = 0;
    for (char ch : a.str())
        rows += ch == '\n';
    o.passed = a.str() == b.str() && rows > 1;
    o.detail = std::to_string(rows - 1) + " rows, " + std::to_string(a.str().size()) + " bytes, "
               + (a.str() == b.str() ? "identical" : "DIFFERENT");
    return o;
}

inline std::vector<std::function<Outcome()>> criteria()
{
    return {class_number_cross_check, dirichlet_formula, variance_identity, fourier_round_trip,
            main_term,                grh_scale_variance, least_prime_table, exceptional_decay,
            structural_floor,         determinism};
}

inline void print(Outcome const & o, std::ostream & out)
{
    out << (o.passed ? "[PASS] " : "[FAIL] ") << "AC" << o.id << ": " << o.title << " -- "
        << o.detail << " (" << cli::fmt(o.seconds) << " s)" << std::endl;
}

/* Runs every criterion, printing one line each; true when all pass. */
inline bool run_all(std::ostream & out)
{
    bool all = true;
    auto list = criteria();
    for (std::size_t i = 0; i < list.size(); ++i) {
        Outcome o;
        try {
            o = list[i]();
        } catch (std::exception const & e) {
            o.id = static_cast<int>(i + 1);
            o.passed = false;
            o.detail = std::string("exception: ") + e.what();
        }
        print(o, out);
        all = all && o.passed;
    }
    return all;
}

} // namespace classprime::acceptance
