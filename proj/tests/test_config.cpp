#include "doctest.h"

#include <sstream>
#include <string>

#include "moskalloc/config.hpp"

using namespace moskalloc;

namespace {

ExperimentConfig parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

int error_line(const std::string& text) {
    try {
        parse_text(text);
    } catch (const ConfigError& e) {
        return e.line;
    }
    return -1;
}

const std::string kBase = "energy_budget = 4e-16\n"
                          "users.1.n_low = 6e8\n"
                          "users.1.n_high = 6e8\n"
                          "users.1.c_init = 0.5\n"
                          "users.1.n_release = 4e4\n"
                          "users.2.n_low = 8e8\n"
                          "users.2.n_high = 8e8\n"
                          "users.2.c_init = 0.5\n"
                          "users.2.n_release = 4e4\n";

} // namespace

TEST_CASE("full config parses") {
    const std::string text = "# two transmitters sharing one budget\n"
                             "\n"
                             "energy_budget = 4e-16\n"
                             "ber_threshold = 0.25\n"
                             "trials = 50000\n"
                             "seed = 42\n"
                             "env.temperature = 300\r\n"
                             "env.boltzmann_constant = 1.3807e-23\n"
                             "users.1.n_low = 6e8\n"
                             "users.1.n_high = 6e8\n"
                             "users.1.c_init = 0.5\n"
                             "users.1.n_release = 4e4\n"
                             "users.2.n_low = 8e8\n"
                             "users.2.n_high = 8e8\n"
                             "users.2.c_init = 0.5\n"
                             "users.2.n_release = 4e4\n"
                             "sweep.variable = rho\n"
                             "sweep.start = 0.1\n"
                             "sweep.stop = 0.9\n"
                             "sweep.step = 0.1\n"
                             "ga.population_size = 40\n"
                             "ga.generations = 120\n"
                             "ga.crossover_rate = 0.7\n"
                             "ga.mutation_rate = 0.15\n"
                             "ga.mutation_sigma = 0.04\n"
                             "ga.elite_count = 3\n"
                             "ga.tournament_size = 4\n"
                             "ga.stagnation_window = 25\n"
                             "ga.penalty_weight = 500\n";
    const ExperimentConfig cfg = parse_text(text);
    CHECK(cfg.energy_budget == 4e-16);
    CHECK(cfg.ber_threshold == 0.25);
    CHECK(cfg.trials == 50000);
    REQUIRE(cfg.seed.has_value());
    CHECK(*cfg.seed == 42);
    CHECK(cfg.env.temperature == 300);
    REQUIRE(cfg.users.size() == 2);
    CHECK(cfg.users[0].n_low == 6e8);
    CHECK(cfg.users[1].n_high == 8e8);
    CHECK(cfg.users[1].n_release == 4e4);
    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->variable == "rho");
    CHECK(cfg.sweep->step == 0.1);
    CHECK(cfg.ga.population_size == 40);
    CHECK(cfg.ga.penalty_weight == 500);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("defaults apply when keys are omitted") {
    const ExperimentConfig cfg = parse_text(kBase);
    CHECK(cfg.ber_threshold == 1.0);
    CHECK(cfg.trials == 1000000);
    CHECK_FALSE(cfg.seed.has_value());
    CHECK_FALSE(cfg.sweep.has_value());
    CHECK(cfg.ga.population_size == 50);
    CHECK(cfg.env.temperature == 298.15);
}

TEST_CASE("parse errors carry line numbers") {
    CHECK(error_line("energy_budget = 4e-16\nbogus_key = 1\n") == 2);
    CHECK(error_line("energy_budget = 4e-16\nenergy_budget = 5e-16\n") == 2);
    CHECK(error_line("this line has no assignment\n") == 1);
    CHECK(error_line("energy_budget =\n") == 1);
    CHECK(error_line("= 4\n") == 1);
    CHECK(error_line("energy_budget = 1.2.3\n") == 1);
    CHECK(error_line("energy_budget = 4e-16\nseed = -5\n") == 2);
    CHECK(error_line("seed = abc\n") == 1);
    CHECK(error_line("trials = 3.5\n") == 1);
    CHECK(error_line("users.0.n_low = 1e8\n") == 1);
    CHECK(error_line("users.1.n_atoms = 1e8\n") == 1);
    CHECK(error_line("users.x.n_low = 1e8\n") == 1);
    CHECK(error_line("sweep.variable = both\n") == 1);
    CHECK(error_line("sweep.shape = rho\n") == 1);
    CHECK(error_line("energy_budget = 1e400\n") == 1);
}

TEST_CASE("structural errors are file level") {
    const std::string missing_user1 = "energy_budget = 4e-16\n"
                                      "users.2.n_low = 6e8\n"
                                      "users.2.n_high = 6e8\n"
                                      "users.2.c_init = 0.5\n"
                                      "users.2.n_release = 4e4\n";
    CHECK_THROWS_AS(parse_text(missing_user1), ConfigError);

    const std::string incomplete = "energy_budget = 4e-16\n"
                                   "users.1.n_low = 6e8\n"
                                   "users.1.n_high = 6e8\n"
                                   "users.1.c_init = 0.5\n";
    CHECK_THROWS_AS(parse_text(incomplete), ConfigError);

    const std::string sweep_no_var = kBase + "sweep.start = 0.1\n"
                                             "sweep.stop = 0.9\n"
                                             "sweep.step = 0.1\n";
    CHECK_THROWS_AS(parse_text(sweep_no_var), ConfigError);

    const std::string bad_step = kBase + "sweep.variable = rho\n"
                                         "sweep.start = 0.1\n"
                                         "sweep.stop = 0.9\n"
                                         "sweep.step = 0\n";
    CHECK_THROWS_AS(parse_text(bad_step), ConfigError);

    const std::string reversed = kBase + "sweep.variable = rho\n"
                                         "sweep.start = 0.9\n"
                                         "sweep.stop = 0.1\n"
                                         "sweep.step = 0.1\n";
    CHECK_THROWS_AS(parse_text(reversed), ConfigError);
}

TEST_CASE("semantic validation") {
    ExperimentConfig cfg = parse_text(kBase);
    cfg.energy_budget = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = parse_text(kBase);
    cfg.ber_threshold = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = parse_text(kBase);
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = parse_text(kBase);
    cfg.users[0].c_init = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = parse_text(kBase);
    cfg.sweep = SweepSpec{"rho", 0.0, 0.9, 0.1};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = parse_text(kBase);
    cfg.sweep = SweepSpec{"energy", -1e-17, 1e-16, 1e-17};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = parse_text(kBase);
    cfg.ga.population_size = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("presets freeze the built-in experiments") {
    const ExperimentConfig fig3 = preset("fig3");
    REQUIRE(fig3.users.size() == 2);
    CHECK(fig3.users[0].n_low == 6e8);
    CHECK(fig3.users[0].n_high == 6e8);
    CHECK(fig3.users[1].n_low == 6e8);
    CHECK(fig3.users[0].n_release == 4e4);
    CHECK(fig3.energy_budget == 4e-16);
    REQUIRE(fig3.sweep.has_value());
    CHECK(fig3.sweep->variable == "rho");
    CHECK(fig3.sweep->start == 0.001);
    CHECK(fig3.sweep->stop == 0.999);
    CHECK(fig3.sweep->step == 0.001);

    const ExperimentConfig fig4 = preset("fig4");
    CHECK(fig4.users[0].n_low == 6e8);
    CHECK(fig4.users[1].n_low == 8e8);

    const ExperimentConfig fig5 = preset("fig5");
    REQUIRE(fig5.users.size() == 3);
    CHECK(fig5.users[0].n_low == 3e8);
    CHECK(fig5.users[1].n_low == 6e8);
    CHECK(fig5.users[2].n_low == 9e8);
    CHECK(fig5.users[0].n_release == 5e4);
    CHECK(fig5.users[2].n_release == 5e4);
    CHECK_FALSE(fig5.sweep.has_value());

    const ExperimentConfig fig6 = preset("fig6");
    REQUIRE(fig6.users.size() == 3);
    CHECK(fig6.users[0].n_low == 3e8);
    CHECK(fig6.users[1].n_low == 3e8);
    CHECK(fig6.users[2].n_low == 3e8);
    CHECK(fig6.users[0].n_release == 2e4);
    CHECK(fig6.users[1].n_release == 4e4);
    CHECK(fig6.users[2].n_release == 6e4);

    for (const std::string& name : preset_names()) CHECK_NOTHROW(preset(name).validate());
    CHECK_THROWS_AS(preset("fig9"), ConfigError);
}

TEST_CASE("missing config file is a config error") {
    CHECK_THROWS_AS(load_config_file("/nonexistent/path/x.cfg"), ConfigError);
}
