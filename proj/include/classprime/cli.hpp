#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "classprime/heegner.hpp"

namespace classprime::cli {

enum exit_code : int {
    ok = 0,
    failure = 1,
    bad_input = 2,
    identity_violation = 3,
    oracle_mismatch = 4,
};

enum class Format { csv, json };

/* coefficient * h^h_exp * (log|D|)^log_exp, written e.g. "h*log2.1",
 * "h2*log2", "100*h2*log2" or a bare number. */
struct ScaleRule
{
    std::string text;
    double coefficient = 1.0;
    double h_exp = 0.0;
    double log_exp = 0.0;

    double eval(std::size_t h, Discriminant const & d) const
    {
        return coefficient * std::pow(static_cast<double>(h), h_exp)
               * std::pow(std::log(static_cast<double>(d.abs())), log_exp);
    }
};

inline double parse_number(std::string const & s, std::string const & rule)
{
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (std::exception const &) {
        used = 0;
    }
    if (used != s.size() || s.empty())
        throw std::invalid_argument("bad scale rule '" + rule + "'");
    return v;
}

inline ScaleRule parse_scale_rule(std::string const & text)
{
    ScaleRule r;
    r.text = text;
    std::stringstream ss(text);
    std::string tok;
    bool any = false;
    while (std::getline(ss, tok, '*')) {
        any = true;
        if (tok.rfind("log", 0) == 0) {
            r.log_exp += tok.size() == 3 ? 1.0 : parse_number(tok.substr(3), text);
        } else if (!tok.empty() && tok[0] == 'h') {
            r.h_exp += tok.size() == 1 ? 1.0 : parse_number(tok.substr(1), text);
        } else {
            r.coefficient *= parse_number(tok, text);
        }
    }
    if (!any || !(r.coefficient > 0))
        throw std::invalid_argument("bad scale rule '" + text + "'");
    return r;
}

struct RunConfig
{
    std::string subcommand;
    i64 disc = 0;
    i64 range_lo = -2000;
    i64 range_hi = -3;
    std::optional<double> t;
    std::string t_rule = "h2*log2";
    std::optional<double> x_cap;
    std::vector<std::string> x_rules{"h*log2.1", "h2*log2", "100*h2*log2"};
    double epsilon = 0.1;
    WeightKind weight = WeightKind::bump;
    double psi_value = 1.0;
    Format format = Format::csv;
    std::string out_path;
    unsigned threads = 1;
    u64 sieve_cap = default_sieve_cap;
    std::size_t h_cap = 1'000'000;
    u64 n_max = 5000;
    u64 l_terms = 0;  // 0: default truncation
};

/* 12 significant digits; shared by CSV and JSON emission */
inline std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline double rounded(double x)
{
    return std::stod(fmt(x));
}

inline std::string fmt_opt(std::optional<u64> const & v, char const * none = "none@cap")
{
    return v ? std::to_string(*v) : std::string(none);
}

inline nlohmann::json json_opt(std::optional<u64> const & v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline std::string join(std::vector<std::size_t> const & v, char sep)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

inline Discriminant negative_disc(i64 d)
{
    auto disc = validate_discriminant(d);
    if (d >= 0)
        throw not_a_discriminant("discriminant must be negative");
    return disc;
}

/* ---- forms ---------------------------------------------------------- */

inline int cmd_forms(RunConfig const & cfg, std::ostream & out)
{
    auto g = build_class_group(negative_disc(cfg.disc));
    if (cfg.format == Format::json) {
        nlohmann::json j;
        j["disc"] = cfg.disc;
        j["fundamental"] = g.disc().fundamental();
        j["h"] = g.h();
        j["orders"] = g.orders();
        auto & forms = j["forms"] = nlohmann::json::array();
        for (std::size_t i = 0; i < g.h(); ++i) {
            auto const & f = g.element(i);
            auto co = g.coords(i);
            forms.push_back({{"class_index", i}, {"a", f.a()}, {"b", f.b()}, {"c", f.c()},
                             {"coords", std::vector<std::uint32_t>(co.begin(), co.end())}});
        }
        out << j.dump(2) << "\n";
        return ok;
    }
    out << "class_index,a,b,c,coords\n";
    for (std::size_t i = 0; i < g.h(); ++i) {
        auto const & f = g.element(i);
        auto co = g.coords(i);
        out << i << ',' << f.a() << ',' << f.b() << ',' << f.c() << ','
            << join(std::vector<std::size_t>(co.begin(), co.end()), ' ') << '\n';
    }
    out << "# h=" << g.h() << "\n# orders=" << join(g.orders(), ' ') << "\n";
    if (!g.disc().fundamental())
        out << "# warning=non-fundamental discriminant\n";
    return ok;
}

/* ---- least-primes --------------------------------------------------- */

inline int cmd_least_primes(RunConfig const & cfg, std::ostream & out)
{
    auto d = negative_disc(cfg.disc);
    auto g = build_class_group(d);
    double lg = std::log(static_cast<double>(d.abs()));
    double h = static_cast<double>(g.h());
    struct Threshold
    {
        std::string name;
        double x;
    };
    std::vector<Threshold> thresholds{
        {"h*log^(2+eps)", h * std::pow(lg, 2.0 + cfg.epsilon)},
        {"h^2*log^2", h * h * lg * lg},
    };
    double cap = cfg.x_cap ? *cfg.x_cap : std::max(2.0, 100.0 * h * h * lg * lg);
    auto lp = least_primes(g, cap, cfg.sieve_cap);
    auto rep = repulsion_report(g, lp);

    auto r_at = [&](double x) -> std::optional<std::pair<std::size_t, std::size_t>> {
        if (x > cap)
            return std::nullopt;
        return std::make_pair(count_exceptional(lp, x), count_exceptional_ideals(lp, x));
    };

    if (cfg.format == Format::json) {
        nlohmann::json j;
        j["disc"] = cfg.disc;
        j["h"] = g.h();
        auto & rows = j["rows"] = nlohmann::json::array();
        for (std::size_t i = 0; i < g.h(); ++i) {
            auto const & f = g.element(i);
            rows.push_back({{"class_index", i}, {"a", f.a()}, {"b", f.b()}, {"c", f.c()},
                            {"heegner_im", rounded(rep.rows[i].height)},
                            {"least_prime", json_opt(lp.prime[i])},
                            {"is_ramified_prime", lp.ramified[i] ? 1 : 0}});
        }
        auto & s = j["summary"];
        s["x_cap"] = rounded(cap);
        s["complete"] = lp.complete();
        s["truncated"] = lp.truncated;
        s["max_least_prime"] = json_opt(rep.max_least_prime);
        s["median_least_prime"] = json_opt(rep.median_least_prime);
        s["floor_holds"] = rep.all_floors_hold;
        auto & rs = s["exceptional"] = nlohmann::json::array();
        for (auto const & t : thresholds) {
            auto r = r_at(t.x);
            rs.push_back({{"rule", t.name}, {"x", rounded(t.x)},
                          {"R_primes", r ? nlohmann::json(r->first) : nlohmann::json(nullptr)},
                          {"R_ideals", r ? nlohmann::json(r->second) : nlohmann::json(nullptr)}});
        }
        out << j.dump(2) << "\n";
        return ok;
    }

    out << "class_index,a,b,c,heegner_im,least_prime,is_ramified_prime\n";
    for (std::size_t i = 0; i < g.h(); ++i) {
        auto const & f = g.element(i);
        out << i << ',' << f.a() << ',' << f.b() << ',' << f.c() << ',' << fmt(rep.rows[i].height)
            << ',' << fmt_opt(lp.prime[i]) << ',' << (lp.ramified[i] ? 1 : 0) << '\n';
    }
    out << "# h=" << g.h() << "\n# x_cap=" << fmt(cap) << "\n# complete=" << lp.complete()
        << "\n# truncated=" << lp.truncated
        << "\n# max_least_prime=" << fmt_opt(rep.max_least_prime, "none")
        << "\n# median_least_prime=" << fmt_opt(rep.median_least_prime, "none")
        << "\n# floor_holds=" << rep.all_floors_hold << "\n";
    for (auto const & t : thresholds) {
        auto r = r_at(t.x);
        out << "# R_primes[" << t.name << "=" << fmt(t.x) << "]="
            << (r ? std::to_string(r->first) : "beyond_cap") << "\n";
        out << "# R_ideals[" << t.name << "=" << fmt(t.x) << "]="
            << (r ? std::to_string(r->second) : "beyond_cap") << "\n";
    }
    return ok;
}

/* ---- variance ------------------------------------------------------- */

inline double resolve_t(RunConfig const & cfg, ClassGroup const & g)
{
    if (cfg.t)
        return *cfg.t;
    return std::max(2.0, parse_scale_rule(cfg.t_rule).eval(g.h(), g.disc()));
}

inline int cmd_variance(RunConfig const & cfg, std::ostream & out)
{
    auto d = negative_disc(cfg.disc);
    auto g = build_class_group(d);
    double T = resolve_t(cfg, g);
    if (!(T >= 2.0))
        throw std::invalid_argument("--t must be >= 2");
    auto w = Weight::of(cfg.weight);
    auto r = psi_report(g, T, w, cfg.sieve_cap);
    double reflected = reflected_weight_sum(g, T, w);
    if (reflected != 0.0)
        throw identity_mismatch("reflected weight sum is not zero");
    double lg = std::log(static_cast<double>(d.abs()));
    double ratio = r.variance / (T * lg * lg);
    double dev = r.psi_total / T - 1.0;
    if (cfg.format == Format::json) {
        nlohmann::json j{{"disc", cfg.disc},
                         {"h", g.h()},
                         {"T", rounded(T)},
                         {"weight", to_string(cfg.weight)},
                         {"psi_total", rounded(r.psi_total)},
                         {"var_definitional", rounded(r.variance)},
                         {"var_dual", rounded(r.variance_dual)},
                         {"rel_diff", rounded(r.variance_rel_diff)},
                         {"var_ratio", rounded(ratio)},
                         {"main_term_deviation", rounded(dev)},
                         {"reflected_sum", rounded(reflected)}};
        out << j.dump(2) << "\n";
        return ok;
    }
    out << "disc,h,T,weight,psi_total,var_definitional,var_dual,rel_diff,var_ratio,"
           "main_term_deviation,reflected_sum\n";
    out << cfg.disc << ',' << g.h() << ',' << fmt(T) << ',' << to_string(cfg.weight) << ','
        << fmt(r.psi_total) << ',' << fmt(r.variance) << ',' << fmt(r.variance_dual) << ','
        << fmt(r.variance_rel_diff) << ',' << fmt(ratio) << ',' << fmt(dev) << ',' << fmt(reflected)
        << '\n';
    return ok;
}

/* ---- scan ----------------------------------------------------------- */

struct ScanRecord
{
    i64 disc = 0;
    std::size_t h = 0;
    std::vector<double> x;         // one per rule
    std::vector<std::size_t> r;    // R(D, X) per rule
    std::optional<u64> max_least_prime;
    std::optional<u64> median_least_prime;
    std::size_t max_reduced_a = 0;
    double var_t = 0;
    double var_ratio = 0;
};

inline ScanRecord scan_one(Discriminant const & d, std::vector<ScaleRule> const & rules,
                           ScaleRule const & t_rule, RunConfig const & cfg)
{
    auto g = build_class_group(d, true);
    if (g.h() > cfg.h_cap)
        throw limit_too_large("h = " + std::to_string(g.h()) + " above h cap");
    ScanRecord rec;
    rec.disc = d.value();
    rec.h = g.h();
    double cap = 2.0;
    for (auto const & rule : rules) {
        rec.x.push_back(rule.eval(g.h(), d));
        cap = std::max(cap, rec.x.back());
    }
    auto lp = least_primes(g, cap, cfg.sieve_cap);
    for (double x : rec.x)
        rec.r.push_back(count_exceptional(lp, x));
    auto rep = repulsion_report(g, lp);
    rec.max_least_prime = rep.max_least_prime;
    rec.median_least_prime = rep.median_least_prime;
    for (auto const & f : g.elements())
        rec.max_reduced_a = std::max<std::size_t>(rec.max_reduced_a, f.a());
    double lg = std::log(static_cast<double>(d.abs()));
    rec.var_t = std::max(2.0, t_rule.eval(g.h(), d));
    auto pr = psi_report(g, rec.var_t, Weight::of(cfg.weight), cfg.sieve_cap);
    rec.var_ratio = pr.variance / (rec.var_t * lg * lg);
    return rec;
}

inline std::vector<i64> fundamental_range(i64 lo, i64 hi)
{
    std::vector<i64> out;
    for (i64 d = std::min<i64>(hi, -3); d >= lo; --d) {
        i64 r = static_cast<i64>(detail::mod(d, 4));
        if (r != 0 && r != 1)
            continue;
        if (validate_discriminant(d).fundamental())
            out.push_back(d);
    }
    return out;
}

inline int cmd_scan(RunConfig const & cfg, std::ostream & out, std::ostream & log = std::cerr)
{
    std::vector<ScaleRule> rules;
    for (auto const & s : cfg.x_rules)
        rules.push_back(parse_scale_rule(s));
    auto t_rule = parse_scale_rule(cfg.t_rule);
    auto discs = fundamental_range(cfg.range_lo, cfg.range_hi);

    std::vector<std::optional<ScanRecord>> results(discs.size());
    std::vector<std::string> errors(discs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < discs.size(); i = next++) {
            try {
                results[i] = scan_one(validate_discriminant(discs[i]), rules, t_rule, cfg);
            } catch (std::exception const & e) {
                errors[i] = e.what();
            }
        }
    };
    unsigned n = std::max(1u, cfg.threads);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto & t : pool)
        t.join();

    for (std::size_t i = 0; i < discs.size(); ++i)
        if (!results[i])
            log << "scan: D=" << discs[i] << " failed: " << errors[i] << "\n";

    if (cfg.format == Format::json) {
        auto arr = nlohmann::json::array();
        for (auto const & rec : results) {
            if (!rec)
                continue;
            nlohmann::json j{{"disc", rec->disc}, {"h", rec->h}};
            for (std::size_t k = 0; k < rules.size(); ++k)
                j["R(" + rules[k].text + ")"] = rec->r[k];
            j["max_least_prime"] = json_opt(rec->max_least_prime);
            j["median_least_prime"] = json_opt(rec->median_least_prime);
            j["max_reduced_a"] = rec->max_reduced_a;
            j["var_t"] = rounded(rec->var_t);
            j["var_ratio"] = rounded(rec->var_ratio);
            arr.push_back(std::move(j));
        }
        out << arr.dump(2) << "\n";
        return ok;
    }
    out << "disc,h";
    for (auto const & rule : rules)
        out << ",R(" << rule.text << ")";
    out << ",max_least_prime,median_least_prime,max_reduced_a,var_t,var_ratio\n";
    for (auto const & rec : results) {
        if (!rec)
            continue;
        out << rec->disc << ',' << rec->h;
        for (auto r : rec->r)
            out << ',' << r;
        out << ',' << fmt_opt(rec->max_least_prime, "none") << ','
            << fmt_opt(rec->median_least_prime, "none") << ',' << rec->max_reduced_a << ','
            << fmt(rec->var_t) << ',' << fmt(rec->var_ratio) << '\n';
    }
    return ok;
}

/* ---- dirichlet-check ------------------------------------------------ */

struct DirichletCheck
{
    bool ok = true;
    std::optional<u64> first_mismatch;
    i64 mismatch_count = 0, mismatch_formula = 0;
    u64 max_r_unramified_prime = 0;
    u64 max_r_ramified_prime = 0;
};

inline DirichletCheck dirichlet_check(ClassGroup const & g, u64 n_max)
{
    DirichletCheck c;
    auto primes = sieve_primes(n_max);
    std::size_t pi = 0;
    for (u64 n = 1; n <= n_max; ++n) {
        u64 count = representation_count(n, g);
        i64 formula = dirichlet_r(n, g.disc());
        if (static_cast<i64>(count) != formula && c.ok) {
            c.ok = false;
            c.first_mismatch = n;
            c.mismatch_count = static_cast<i64>(count);
            c.mismatch_formula = formula;
        }
        if (pi < primes.size() && primes[pi] == n) {
            ++pi;
            if (g.disc().abs() % n == 0)
                c.max_r_ramified_prime = std::max(c.max_r_ramified_prime, count);
            else
                c.max_r_unramified_prime = std::max(c.max_r_unramified_prime, count);
        }
    }
    return c;
}

inline int cmd_dirichlet_check(RunConfig const & cfg, std::ostream & out)
{
    auto d = negative_disc(cfg.disc);
    if (!d.fundamental())
        throw not_fundamental("dirichlet-check needs a fundamental discriminant");
    if (cfg.n_max < 1)
        throw std::invalid_argument("--n-max must be >= 1");
    auto g = build_class_group(d);
    auto c = dirichlet_check(g, cfg.n_max);
    if (cfg.format == Format::json) {
        nlohmann::json j{{"disc", cfg.disc},
                         {"n_max", cfg.n_max},
                         {"w_d", unit_count(cfg.disc)},
                         {"status", c.ok ? "OK" : "MISMATCH"},
                         {"first_mismatch", json_opt(c.first_mismatch)},
                         {"max_r_unramified_prime", c.max_r_unramified_prime},
                         {"max_r_ramified_prime", c.max_r_ramified_prime}};
        out << j.dump(2) << "\n";
    } else {
        out << "disc,n_max,w_d,status,first_mismatch,max_r_unramified_prime,max_r_ramified_prime\n";
        out << cfg.disc << ',' << cfg.n_max << ',' << unit_count(cfg.disc) << ','
            << (c.ok ? "OK" : "MISMATCH") << ',' << fmt_opt(c.first_mismatch, "") << ','
            << c.max_r_unramified_prime << ',' << c.max_r_ramified_prime << '\n';
    }
    return c.ok ? ok : oracle_mismatch;
}

/* ---- heegner -------------------------------------------------------- */

inline int cmd_heegner(RunConfig const & cfg, std::ostream & out)
{
    auto d = negative_disc(cfg.disc);
    auto g = build_class_group(d);
    if (!(cfg.psi_value > 0))
        throw std::invalid_argument("--psi-value must be positive");
    double bound = std::sqrt(static_cast<double>(d.abs())) * cfg.psi_value;
    double frac = coefficient_bound_fraction(g, cfg.psi_value);
    std::optional<LValue> l;
    if (d.fundamental())
        l = l_one_chi(d, cfg.l_terms ? cfg.l_terms : default_l_terms(d));
    auto rewrite = cramer_via_class_number(g, cfg.psi_value);
    std::optional<double> pred;
    if (l)
        pred = cramer_prediction(g, cfg.psi_value, l->value);

    if (cfg.format == Format::json) {
        nlohmann::json j;
        j["disc"] = cfg.disc;
        j["h"] = g.h();
        auto & rows = j["rows"] = nlohmann::json::array();
        for (std::size_t i = 0; i < g.h(); ++i) {
            auto p = heegner_point(g, i);
            auto m = max_coefficient(g.element(i));
            rows.push_back({{"class_index", i}, {"a", p.a}, {"b", p.b}, {"c", p.c},
                            {"re", rounded(p.re)}, {"im", rounded(p.im)}, {"max_coefficient", m},
                            {"below_bound", static_cast<double>(m) < bound}});
        }
        j["psi_value"] = rounded(cfg.psi_value);
        j["coefficient_bound_fraction"] = rounded(frac);
        j["l_one"] = l ? nlohmann::json(rounded(l->value)) : nlohmann::json(nullptr);
        j["cramer_prediction"] = pred ? nlohmann::json(rounded(*pred)) : nlohmann::json(nullptr);
        j["class_number_constant"] = rounded(rewrite.constant);
        j["class_number_prediction"] = rounded(rewrite.value);
        out << j.dump(2) << "\n";
        return ok;
    }
    out << "class_index,a,b,c,re,im,max_coefficient,below_bound\n";
    for (std::size_t i = 0; i < g.h(); ++i) {
        auto p = heegner_point(g, i);
        auto m = max_coefficient(g.element(i));
        out << i << ',' << p.a << ',' << p.b << ',' << p.c << ',' << fmt(p.re) << ',' << fmt(p.im)
            << ',' << m << ',' << (static_cast<double>(m) < bound ? 1 : 0) << '\n';
    }
    out << "# h=" << g.h() << "\n# psi_value=" << fmt(cfg.psi_value)
        << "\n# coefficient_bound_fraction=" << fmt(frac)
        << "\n# l_one=" << (l ? fmt(l->value) : "n/a")
        << "\n# cramer_prediction=" << (pred ? fmt(*pred) : "n/a")
        << "\n# class_number_constant=" << fmt(rewrite.constant)
        << "\n# class_number_prediction=" << fmt(rewrite.value) << "\n";
    return ok;
}

} // namespace classprime::cli
