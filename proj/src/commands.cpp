#include "moskalloc/commands.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "moskalloc/allocator.hpp"
#include "moskalloc/ber.hpp"
#include "moskalloc/csv.hpp"
#include "moskalloc/exact.hpp"
#include "moskalloc/rng.hpp"

namespace moskalloc {

namespace {

// binary mode keeps emitted bytes identical across platforms
std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError(0, "cannot open output file '" + path + "'");
    return f;
}

OptimizationProblem problem_from(const ExperimentConfig& cfg) {
    OptimizationProblem p;
    p.users = cfg.users;
    p.env = cfg.env;
    p.e_total = cfg.energy_budget;
    p.ber_threshold = cfg.ber_threshold;
    return p;
}

std::int64_t sweep_count(const SweepSpec& sw) {
    return static_cast<std::int64_t>(std::floor((sw.stop - sw.start) / sw.step + 1e-9)) + 1;
}

} // namespace

int cmd_ber_curve(const ExperimentConfig& cfg, const std::optional<std::string>& out,
                  std::ostream& console) {
    if (cfg.users.size() != 2)
        throw ConfigError(0, "ber-curve needs exactly two users, got " +
                                 std::to_string(cfg.users.size()));
    if (!cfg.sweep || cfg.sweep->variable != "rho")
        throw ConfigError(0, "ber-curve needs a rho sweep (sweep.variable = rho)");

    std::ostringstream csv;
    csv << "rho,ber_user1,ber_user2,total_ber,valid_flag\n";
    const SweepSpec& sw = *cfg.sweep;
    const std::int64_t n = sweep_count(sw);
    double best_rho = std::numeric_limits<double>::quiet_NaN();
    double best_total = std::numeric_limits<double>::infinity();
    std::int64_t valid_rows = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double rho = sw.start + static_cast<double>(i) * sw.step;
        double b1 = std::numeric_limits<double>::quiet_NaN();
        double b2 = b1, total = b1;
        int valid = 0;
        try {
            b1 = transmitter_ber(cfg.users[0], cfg.env, rho * cfg.energy_budget).ber;
            b2 = transmitter_ber(cfg.users[1], cfg.env, (1.0 - rho) * cfg.energy_budget).ber;
            total = b1 + b2;
            valid = 1;
            ++valid_rows;
            if (total < best_total) {
                best_total = total;
                best_rho = rho;
            }
        } catch (const std::domain_error&) {
            // row kept with valid_flag 0 so the sweep grid stays rectangular
        }
        csv << csv_num(rho) << ',' << csv_num(b1) << ',' << csv_num(b2) << ',' << csv_num(total)
            << ',' << valid << '\n';
    }

    if (out) {
        open_out(*out) << csv.str();
        console << "ber-curve: " << n << " rows (" << valid_rows << " valid) -> " << *out << "\n";
        if (valid_rows)
            console << "minimum total_ber " << csv_num(best_total) << " at rho "
                    << csv_num(best_rho) << "\n";
    } else {
        console << csv.str();
    }
    return 0;
}

int cmd_optimize(const ExperimentConfig& cfg, const std::optional<std::string>& out, bool force_ga,
                 std::ostream& console) {
    if (cfg.users.size() < 2)
        throw ConfigError(0, "optimize needs at least two users");
    const OptimizationProblem problem = problem_from(cfg);

    Allocation alloc;
    std::vector<GenerationStats> trace;
    std::string method;
    int generations_run = 0;
    if (cfg.users.size() == 2 && !force_ga) {
        method = "two-user golden-section";
        alloc = optimize_two_user(problem);
    } else {
        method = "genetic algorithm";
        GaSettings ga = cfg.ga;
        ga.seed = cfg.seed.value_or(1);
        GaResult res = optimize_ga(problem, ga);
        alloc = std::move(res.allocation);
        trace = std::move(res.trace);
        generations_run = res.generations_run;
    }

    std::ostringstream csv;
    csv << "record,index,energy_joule,rho,ber,best_fitness,mean_fitness\n";
    double e_sum = 0, rho_sum = 0;
    for (std::size_t k = 0; k < alloc.energies.size(); ++k) {
        e_sum += alloc.energies[k];
        rho_sum += alloc.rho[k];
        csv << "alloc," << (k + 1) << ',' << csv_num(alloc.energies[k]) << ','
            << csv_num(alloc.rho[k]) << ',' << csv_num(alloc.per_user_ber[k]) << ",,\n";
    }
    csv << "total,," << csv_num(e_sum) << ',' << csv_num(rho_sum) << ','
        << csv_num(alloc.total_ber) << ",,\n";
    for (const GenerationStats& g : trace)
        csv << "trace," << g.generation << ",,,," << csv_num(g.best_fitness) << ','
            << csv_num(g.mean_fitness) << '\n';

    std::ostringstream summary;
    summary << "optimize (" << method << ")\n";
    for (std::size_t k = 0; k < alloc.energies.size(); ++k)
        summary << "  user " << (k + 1) << ": rho = " << csv_num(alloc.rho[k])
                << ", energy = " << csv_num(alloc.energies[k])
                << " J, ber = " << csv_num(alloc.per_user_ber[k]) << "\n";
    summary << "  total ber = " << csv_num(alloc.total_ber) << "\n";
    if (!trace.empty())
        summary << "  generations run = " << generations_run << "\n";

    if (out) {
        open_out(*out) << csv.str();
        console << summary.str() << "report -> " << *out << "\n";
    } else {
        console << csv.str();
    }
    return 0;
}

namespace {

struct CheckLine {
    bool pass;
    std::string name;
    double measured;
    double limit;
};

void run_battery(const ExperimentConfig& cfg, std::vector<CheckLine>& checks) {
    const std::uint64_t seed = cfg.seed.value_or(1);
    const double e_share = cfg.energy_budget / static_cast<double>(cfg.users.size());

    for (std::size_t k = 0; k < cfg.users.size(); ++k) {
        const TransmitterConfig& u = cfg.users[k];
        const std::string suffix = "_user" + std::to_string(k + 1);

        // probes the full share first so a thermodynamically broken config
        // fails loudly as a domain error instead of producing half a report
        fractions_after_energy(u, cfg.env, e_share);

        double worst_roundtrip = 0;
        double worst_conservation = 0;
        constexpr int kGridPoints = 25;
        const double lg_lo = std::log(1e-18);
        const double lg_hi = std::log(e_share);
        for (int i = 0; i < kGridPoints; ++i) {
            const double e = std::exp(lg_lo + (lg_hi - lg_lo) * i / (kGridPoints - 1));
            const ReservoirFractions fr = fractions_after_energy(u, cfg.env, e);
            const double back = energy_cost_exact(u, cfg.env, fr.moved);
            const double rel = std::abs(back - e) / e;
            const double ratio = rel / (fr.beta * fr.beta);
            worst_roundtrip = std::max(worst_roundtrip, ratio);
            const double lhs = u.n_low * fr.c_low + u.n_high * fr.c_high;
            const double rhs = u.c_init * u.n_total();
            worst_conservation = std::max(worst_conservation, std::abs(lhs - rhs) / rhs);
        }
        checks.push_back({worst_roundtrip <= 1.0, "roundtrip_within_beta_sq" + suffix,
                          worst_roundtrip, 1.0});
        checks.push_back(
            {worst_conservation <= 1e-12, "species_conservation" + suffix, worst_conservation,
             1e-12});
    }

    {
        // scaled-size tail agreement: reservoirs of 2e5 shifted by 2000
        // molecules so c_low = 0.49, release 2001
        TransmitterConfig u;
        u.n_low = u.n_high = 2e5;
        u.c_init = 0.5;
        u.n_release = 2001;
        IntegerReservoirState st;
        st.k2_low = 98000;
        st.k1_low = 102000;
        st.k2_high = 102000;
        st.k1_high = 98000;
        const double exact = hypergeom_tail_bit0(st, u);
        ReservoirFractions fr;
        fr.c_low = 0.49;
        fr.c_high = 0.51;
        const double cont = p_correct_bit0(u, fr, ThresholdMode::continuous);
        const double integer = p_correct_bit0(u, fr, ThresholdMode::integer);
        const double worst = std::max(std::abs(cont - exact), std::abs(integer - exact));
        checks.push_back({worst <= 1e-2, "tail_agreement_scaled", worst, 1e-2});
    }
    {
        TransmitterConfig u;
        u.n_low = u.n_high = 20;
        u.c_init = 0.5;
        u.n_release = 5;
        IntegerReservoirState st;
        st.k1_low = 12;
        st.k2_low = 8;
        st.k1_high = 12;
        st.k2_high = 8;
        const double got = hypergeom_tail_bit0(st, u);
        const double want = 10912.0 / 15504.0;
        checks.push_back({std::abs(got - want) <= 1e-12, "tail_small_exhaustive",
                          std::abs(got - want), 1e-12});
    }

    for (std::size_t k = 0; k < cfg.users.size(); ++k) {
        const TransmitterConfig& u = cfg.users[k];
        const double analytic = transmitter_ber(u, cfg.env, e_share).ber;
        const IntegerReservoirState st = build_state(u, cfg.env, e_share);
        const TrialStats stats =
            run_trials(st, u, cfg.trials, seed + static_cast<std::uint64_t>(k));
        const double sigma =
            std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(cfg.trials));
        checks.push_back({std::abs(stats.ber - analytic) <= 3 * sigma,
                          "mc_consistency_user" + std::to_string(k + 1),
                          std::abs(stats.ber - analytic), 3 * sigma});
    }

    if (cfg.users.size() >= 2) {
        const TransmitterConfig& u1 = cfg.users[0];
        const TransmitterConfig& u2 = cfg.users[1];
        const bool applies = u1.c_init == 0.5 && u2.c_init == 0.5 && u1.n_low == u1.n_high &&
                             u2.n_low == u2.n_high;
        if (applies) {
            const double cap1 = max_valid_energy(u1, cfg.env);
            const double cap2 = max_valid_energy(u2, cfg.env);
            SplitMix64 rng = substream(seed, 1001);
            double worst = 0;
            for (int i = 0; i < 20; ++i) {
                const double rho = 0.05 + 0.9 * rng.next_unit();
                const double e_hi = std::min({cfg.energy_budget, 0.95 * cap1 / rho,
                                              0.95 * cap2 / (1.0 - rho)});
                const double e_tot = (0.1 + 0.85 * rng.next_unit()) * e_hi;
                const double g = two_user_ber_derivative(rho, e_tot, u1, u2, cfg.env);
                const double h = 1e-6;
                const double fd = (two_user_total_ber(rho + h, e_tot, u1, u2, cfg.env) -
                                   two_user_total_ber(rho - h, e_tot, u1, u2, cfg.env)) /
                                  (2 * h);
                const double scale = std::max({std::abs(g), std::abs(fd), 1e-3});
                worst = std::max(worst, std::abs(g - fd) / scale);
            }
            checks.push_back({worst <= 1e-6, "derivative_vs_fd", worst, 1e-6});
        }
    }
}

} // namespace

int cmd_validate(const ExperimentConfig& cfg, const std::optional<std::string>& out,
                 std::ostream& console) {
    std::vector<CheckLine> checks;
    run_battery(cfg, checks);

    std::ostringstream report;
    int failed = 0;
    for (const CheckLine& c : checks) {
        failed += !c.pass;
        report << (c.pass ? "PASS " : "FAIL ") << c.name << " measured=" << csv_num(c.measured)
               << " limit=" << csv_num(c.limit) << "\n";
    }
    report << (failed ? "RESULT FAIL (" : "RESULT PASS (") << (checks.size() - failed) << "/"
           << checks.size() << " checks)\n";

    console << report.str();
    if (out) open_out(*out) << report.str();
    return failed ? 1 : 0;
}

int cmd_simulate(const ExperimentConfig& cfg, const std::optional<std::string>& out,
                 std::ostream& console) {
    const TransmitterConfig& u = cfg.users[0]; // simulation targets the first user
    const std::uint64_t seed = cfg.seed.value_or(1);
    const double cap = max_valid_energy(u, cfg.env);

    std::vector<double> grid;
    if (cfg.sweep && cfg.sweep->variable == "energy") {
        const SweepSpec& sw = *cfg.sweep;
        const std::int64_t n = sweep_count(sw);
        for (std::int64_t i = 0; i < n; ++i)
            grid.push_back(sw.start + static_cast<double>(i) * sw.step);
    } else {
        const double e = cfg.energy_budget;
        grid = {0.0, e / 8, e / 4, e / 2, e};
    }

    std::ostringstream csv;
    csv << "energy_joule,analytic_ber,empirical_ber,ci_halfwidth,n_trials\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double e = grid[i];
        if (!(e < cap))
            throw std::domain_error("simulate grid point " + std::to_string(e) +
                                    " J at or beyond the valid energy limit");
        const double analytic = transmitter_ber(u, cfg.env, e).ber;
        const IntegerReservoirState st = build_state(u, cfg.env, e);
        const std::uint64_t row_seed = mix64(seed + kGolden * (i + 1));
        const TrialStats stats = run_trials(st, u, cfg.trials, row_seed);
        csv << csv_num(e) << ',' << csv_num(analytic) << ',' << csv_num(stats.ber) << ','
            << csv_num(stats.ci_half_ber) << ',' << csv_num(stats.trials) << '\n';
    }

    if (out) {
        open_out(*out) << csv.str();
        console << "simulate: " << grid.size() << " energies x " << cfg.trials << " trials -> "
                << *out << "\n";
    } else {
        console << csv.str();
    }
    return 0;
}

} // namespace moskalloc
