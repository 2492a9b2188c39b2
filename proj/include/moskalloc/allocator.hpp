#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "moskalloc/ber.hpp"
#include "moskalloc/thermo.hpp"

// Energy-budget allocation across K transmitters: scalar minimization for the
// two-user case, a real-coded genetic algorithm for general K.

namespace moskalloc {

struct OptimizationProblem {
    std::vector<TransmitterConfig> users; // K >= 2
    Environment env;
    double e_total = 0;        // J, shared budget
    double ber_threshold = 1;  // per-user cap; 1.0 disables the constraint

    void validate() const; // throws std::invalid_argument
};

struct Allocation {
    std::vector<double> energies;     // J, per user
    std::vector<double> rho;          // energies / e_total
    std::vector<double> per_user_ber;
    double total_ber = 0;             // sum of per-user BERs
};

struct ConstraintReport {
    bool ok = false;
    std::vector<std::string> violations; // one line per violated constraint, with margin
};

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Check budget, non-negativity, per-user energy-domain validity and the BER
// threshold for a proposed energy split. Never throws; everything wrong with
// the allocation comes back in the report.
ConstraintReport feasible(const OptimizationProblem& problem, const std::vector<double>& energies);

// Evaluate a valid energy split into a full Allocation (throws domain errors
// if a share is outside its user's valid region).
Allocation evaluate_allocation(const OptimizationProblem& problem,
                               const std::vector<double>& energies);

// Two-user path: coarse 1e-3 grid over the thermodynamically valid open
// interval of rho, golden-section refinement to |drho| <= 1e-6, then a
// derivative sign-change cross-check when the closed form applies. The BER
// threshold is enforced after the fact: if the unconstrained optimum violates
// it, the search is redone inside the feasible sub-interval, and
// InfeasibleError is thrown when that sub-interval is empty.
Allocation optimize_two_user(const OptimizationProblem& problem);

struct GaSettings {
    int population_size = 50;
    int generations = 200;
    double crossover_rate = 0.8;
    double mutation_rate = 0.1;   // per gene
    double mutation_sigma = 0.05; // in fraction space
    int elite_count = 2;
    int tournament_size = 3;
    int stagnation_window = 30;
    double penalty_weight = 1e3;
    std::uint64_t seed = 1;

    void validate() const; // throws std::invalid_argument
};

struct GenerationStats {
    int generation = 0;
    double best_fitness = 0;
    double mean_fitness = 0;
};

struct GaResult {
    Allocation allocation;
    std::vector<GenerationStats> trace;
    int generations_run = 0;
    bool stopped_early = false; // stagnation cut it short
};

// Real-coded GA over the simplex of budget fractions. Chromosomes are
// K-vectors repaired onto {rho >= 0, sum rho = 1} (the full budget is always
// spent; per-user BER is strictly decreasing in energy, so nothing is gained
// by holding some back). Fitness = total BER + penalty_weight * sum of
// BER-threshold excesses. Tournament selection, per-gene blend crossover,
// additive Gaussian mutation with re-repair, elitism. Stops at the
// generation cap or when best fitness improves by < 1e-9 over
// stagnation_window generations. Throws InfeasibleError if the final best
// individual violates a hard constraint.
GaResult optimize_ga(const OptimizationProblem& problem, const GaSettings& settings);

// Euclidean projection onto {x >= 0, sum x = total}; the GA repair operator.
// Idempotent: projecting a point already on the simplex returns it unchanged.
std::vector<double> project_to_simplex(std::vector<double> v, double total = 1.0);

} // namespace moskalloc
