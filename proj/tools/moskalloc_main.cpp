#include <cstdlib>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "moskalloc/allocator.hpp"
#include "moskalloc/commands.hpp"
#include "moskalloc/config.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> trials;
};

void add_common(CLI::App* sub, CommonArgs& args, bool with_trials) {
    auto* cfg = sub->add_option("--config", args.config_path, "experiment config file");
    auto* pre = sub->add_option("--preset", args.preset,
                                "built-in experiment (fig3, fig4, fig5, fig6)");
    cfg->excludes(pre);
    pre->excludes(cfg);
    sub->add_option_function<std::string>(
        "--out", [&args](const std::string& v) { args.out = v; }, "write results to this file");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&args](std::uint64_t v) { args.seed = v; }, "override the random seed");
    if (with_trials)
        sub->add_option_function<std::int64_t>(
            "--trials", [&args](std::int64_t v) { args.trials = v; },
            "Monte Carlo trials per point")
            ->check(CLI::PositiveNumber);
}

moskalloc::ExperimentConfig resolve(const CommonArgs& args) {
    if (args.config_path.empty() && args.preset.empty())
        throw moskalloc::ConfigError(0, "need either --config or --preset");
    moskalloc::ExperimentConfig cfg = args.preset.empty()
                                          ? moskalloc::load_config_file(args.config_path)
                                          : moskalloc::preset(args.preset);
    if (args.seed) {
        cfg.seed = *args.seed;
    } else if (!cfg.seed) {
        if (const char* env = std::getenv("MOSK_ALLOC_SEED")) {
            const std::string s(env);
            try {
                std::size_t pos = 0;
                if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
                    throw std::invalid_argument("not a decimal integer");
                cfg.seed = std::stoull(s, &pos);
            } catch (const std::exception&) {
                throw moskalloc::ConfigError(0, "MOSK_ALLOC_SEED must be an unsigned decimal, got '" +
                                                    s + "'");
            }
        } else {
            cfg.seed = 1;
        }
    }
    if (args.trials) cfg.trials = *args.trials;
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-budget energy allocation for two-reservoir molecular transmitters"};
    app.require_subcommand(1);

    CommonArgs curve_args, opt_args, val_args, sim_args;
    bool force_ga = false;

    CLI::App* curve = app.add_subcommand("ber-curve",
                                         "sweep the two-user energy split and tabulate BER");
    add_common(curve, curve_args, false);

    CLI::App* opt = app.add_subcommand("optimize", "minimize total BER under the energy budget");
    add_common(opt, opt_args, false);
    opt->add_flag("--force-ga", force_ga, "use the population search even for two users");

    CLI::App* val = app.add_subcommand("validate",
                                       "cross-check the analytic model against exact oracles");
    add_common(val, val_args, true);

    CLI::App* sim = app.add_subcommand("simulate",
                                       "Monte Carlo the first user across an energy grid");
    add_common(sim, sim_args, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (curve->parsed())
            return moskalloc::cmd_ber_curve(resolve(curve_args), curve_args.out, std::cout);
        if (opt->parsed())
            return moskalloc::cmd_optimize(resolve(opt_args), opt_args.out, force_ga, std::cout);
        if (val->parsed())
            return moskalloc::cmd_validate(resolve(val_args), val_args.out, std::cout);
        if (sim->parsed())
            return moskalloc::cmd_simulate(resolve(sim_args), sim_args.out, std::cout);
    } catch (const moskalloc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const moskalloc::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
