// classprime: class groups of imaginary quadratic discriminants, least
// primes per class, and weighted prime-ideal statistics.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "classprime/acceptance.hpp"

namespace {

using namespace classprime;
using cli::RunConfig;

struct App
{
    CLI::App app{"classprime: prime ideals in imaginary quadratic class groups"};
    RunConfig cfg;
    std::string config_path;
    std::map<std::string, CLI::App *> subs;

    App()
    {
        app.require_subcommand(1);
        app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

        auto common = [this](CLI::App * s, bool with_disc) {
            if (with_disc)
                s->add_option("--disc", cfg.disc, "negative discriminant D (required)")
                    ->allow_extra_args(false);
            s->add_option("--format", cfg.format, "output format")
                ->transform(CLI::CheckedTransformer(
                    std::map<std::string, cli::Format>{{"csv", cli::Format::csv},
                                                       {"json", cli::Format::json}}));
            s->add_option("--out", cfg.out_path, "write output to this path instead of stdout");
            s->add_option("--config", config_path, "key=value file; flags take precedence");
            s->add_option("--sieve-cap", cfg.sieve_cap, "largest prime the sieve may reach");
        };
        auto weight = [this](CLI::App * s) {
            s->add_option("--weight", cfg.weight, "bump or indicator")
                ->transform(CLI::CheckedTransformer(
                    std::map<std::string, WeightKind>{{"bump", WeightKind::bump},
                                                      {"indicator", WeightKind::indicator}}));
        };

        auto * forms = add("forms", "reduced forms, class number and cyclic decomposition");
        common(forms, true);

        auto * lp = add("least-primes", "least prime represented by each class");
        common(lp, true);
        lp->add_option("--x-cap", cfg.x_cap, "examine primes p < X (default 100 h^2 log^2|D|)");
        lp->add_option("--eps", cfg.epsilon, "epsilon in the h log^(2+eps)|D| threshold");

        auto * var = add("variance", "psi sums by class and character, and their variance");
        common(var, true);
        var->add_option("--t", cfg.t, "scale T (default from --t-rule)");
        var->add_option("--t-rule", cfg.t_rule, "scale rule such as h2*log2");
        weight(var);

        auto * scan = add("scan", "one CSV row per fundamental discriminant in a range");
        common(scan, false);
        scan->add_option("--from", cfg.range_lo, "most negative discriminant");
        scan->add_option("--to", cfg.range_hi, "least negative discriminant");
        scan->add_option("--x-rule", cfg.x_rules, "threshold rules, e.g. h*log2.1")
            ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
        scan->add_option("--t-rule", cfg.t_rule, "variance scale rule");
        scan->add_option("--threads", cfg.threads, "worker threads")
            ->envname("CLASSPRIME_THREADS")
            ->check(CLI::PositiveNumber);
        scan->add_option("--h-cap", cfg.h_cap, "skip discriminants with larger class number");
        weight(scan);

        auto * dc = add("dirichlet-check", "lattice-point counts against Dirichlet's formula");
        common(dc, true);
        dc->add_option("--n-max", cfg.n_max, "check 1 <= n <= n-max");

        auto * hg = add("heegner", "Heegner points and the coefficient-size diagnostics");
        common(hg, true);
        hg->add_option("--psi-value", cfg.psi_value, "growth parameter psi(D)");
        hg->add_option("--l-terms", cfg.l_terms, "terms in the L(1, chi_D) partial sum");

        add("selftest", "run the acceptance criteria");
    }

    CLI::App * add(std::string const & name, std::string const & help)
    {
        auto * s = app.add_subcommand(name, help);
        subs[name] = s;
        return s;
    }

    CLI::App * chosen() const
    {
        auto v = app.get_subcommands();
        return v.empty() ? nullptr : v.front();
    }
};

std::vector<std::string> read_config(std::string const & path, CLI::App const & sub)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot read config file " + path);
    std::vector<std::string> args;
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#')
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line without '=': " + line);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        auto const * opt = sub.get_option_no_throw("--" + key);
        if (!opt)
            throw std::invalid_argument("unknown config key '" + key + "'");
        if (opt->count() > 0 || key == "config")
            continue;  // given on the command line
        args.push_back("--" + key);
        args.push_back(value);
    }
    return args;
}

int run(RunConfig & cfg, std::string const & name)
{
    std::ofstream file;
    std::ostream * out = &std::cout;
    if (!cfg.out_path.empty()) {
        file.open(cfg.out_path);
        if (!file)
            throw std::invalid_argument("cannot open " + cfg.out_path);
        out = &file;
    }
    if (name == "forms")
        return cli::cmd_forms(cfg, *out);
    if (name == "least-primes")
        return cli::cmd_least_primes(cfg, *out);
    if (name == "variance")
        return cli::cmd_variance(cfg, *out);
    if (name == "scan")
        return cli::cmd_scan(cfg, *out);
    if (name == "dirichlet-check")
        return cli::cmd_dirichlet_check(cfg, *out);
    if (name == "heegner")
        return cli::cmd_heegner(cfg, *out);
    if (name == "selftest")
        return acceptance::run_all(*out) ? cli::ok : cli::failure;
    return cli::bad_input;
}

} // namespace

int main(int argc, char ** argv)
{
    auto first = std::make_unique<App>();
    try {
        first->app.parse(argc, argv);
    } catch (CLI::ParseError const & e) {
        int rc = first->app.exit(e);
        return rc == 0 ? 0 : cli::bad_input;
    }

    std::unique_ptr<App> final_app = std::move(first);
    try {
        if (!final_app->config_path.empty()) {
            auto * sub = final_app->chosen();
            auto extra = read_config(final_app->config_path, *sub);
            std::vector<std::string> args{argv[0], sub->get_name()};
            args.insert(args.end(), extra.begin(), extra.end());
            bool seen = false;
            for (int i = 1; i < argc; ++i) {
                if (!seen && argv[i] == sub->get_name()) {
                    seen = true;
                    continue;
                }
                args.emplace_back(argv[i]);
            }
            std::vector<char const *> cargs;
            for (auto const & a : args)
                cargs.push_back(a.c_str());
            auto second = std::make_unique<App>();
            second->app.parse(static_cast<int>(cargs.size()), cargs.data());
            final_app = std::move(second);
        }
        auto * sub = final_app->chosen();
        auto const * disc = sub->get_option_no_throw("--disc");
        if (disc && disc->count() == 0)
            throw std::invalid_argument("--disc is required");
        return run(final_app->cfg, sub->get_name());
    } catch (CLI::ParseError const & e) {
        final_app->app.exit(e);
        return cli::bad_input;
    } catch (identity_mismatch const & e) {
        std::cerr << "identity violation: " << e.what() << "\n";
        return cli::identity_violation;
    } catch (std::exception const & e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::bad_input;
    }
}
