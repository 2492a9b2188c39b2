#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "moskalloc/config.hpp"

// Command implementations behind the CLI. Each takes a fully resolved config
// (seed and trial-count overrides already applied by the front end), writes
// its primary output to `out` when a path is given (stdout otherwise), and
// returns the process exit code for the non-throwing outcomes. Config,
// infeasibility and domain errors are thrown and mapped by the front end.

namespace moskalloc {

// rho sweep for two users: CSV rows
// rho,ber_user1,ber_user2,total_ber,valid_flag
int cmd_ber_curve(const ExperimentConfig& cfg, const std::optional<std::string>& out,
                  std::ostream& console);

// budget split: scalar path for K = 2, GA otherwise or when forced. CSV rows
// record,index,energy_joule,rho,ber,best_fitness,mean_fitness where record is
// alloc/total/trace; trace rows only exist on the GA path.
int cmd_optimize(const ExperimentConfig& cfg, const std::optional<std::string>& out,
                 bool force_ga, std::ostream& console);

// invariant battery: small-move roundtrip, species conservation, analytic vs
// exact tails, Monte Carlo consistency, derivative vs finite differences.
// Prints one PASS/FAIL line per check; returns 1 if any check fails.
int cmd_validate(const ExperimentConfig& cfg, const std::optional<std::string>& out,
                 std::ostream& console);

// empirical vs analytic BER over an energy grid for the first user: CSV rows
// energy_joule,analytic_ber,empirical_ber,ci_halfwidth,n_trials
int cmd_simulate(const ExperimentConfig& cfg, const std::optional<std::string>& out,
                 std::ostream& console);

} // namespace moskalloc
