#pragma once

#include <cstdint>

#include "moskalloc/thermo.hpp"

// Ground-truth engines: exact hypergeometric tail sums for the decision
// probabilities, and a seeded Monte Carlo simulator of release-and-decide
// trials. Both are used as oracles against the normal-approximation module.

namespace moskalloc {

// Integer-count snapshot of both reservoirs after a purification move.
struct IntegerReservoirState {
    std::int64_t k1_low = 0;
    std::int64_t k2_low = 0;
    std::int64_t k1_high = 0;
    std::int64_t k2_high = 0;

    std::int64_t n_low() const { return k1_low + k2_low; }
    std::int64_t n_high() const { return k1_high + k2_high; }
    void validate() const; // throws std::invalid_argument
};

// Round the real-valued move to integer bookkeeping: m_int = nearest integer
// (ties to even), k2_low = round(c*n_low) - m_int, k2_high = round(c*n_high)
// + m_int. Total k2 is conserved exactly by construction. Throws
// std::domain_error if any count would go negative.
IntegerReservoirState build_state(const TransmitterConfig& cfg, const Environment& env,
                                  double energy);

// P(X >= threshold) for X ~ Hypergeometric(population, successes, draws):
// X counts successes in `draws` unordered picks from `population` items of
// which `successes` qualify. Evaluated by a pmf ratio walk anchored at the
// mode and self-normalized over the support, which keeps absolute error near
// machine epsilon even when population is ~1e9 and log-gamma alone would
// lose digits. Cost is O(draws).
double hypergeom_sf(std::int64_t population, std::int64_t successes, std::int64_t draws,
                    std::int64_t threshold);

// pmf via log-gamma; independent route used for cross-checks
double hypergeom_pmf(std::int64_t population, std::int64_t successes, std::int64_t draws,
                     std::int64_t k);

// Exact P(decoded 0 | sent 0): tail of the k1 count drawn from the low
// reservoir, threshold floor(n_release*(1-c_init)) + 1. Requires
// n_release <= n_low.
double hypergeom_tail_bit0(const IntegerReservoirState& state, const TransmitterConfig& cfg);

// Exact P(decoded 1 | sent 1): tail of the k2 count drawn from the high
// reservoir, threshold floor(n_release*c_init) + 1.
double hypergeom_tail_bit1(const IntegerReservoirState& state, const TransmitterConfig& cfg);

struct TrialOutcome {
    int sent = 0;
    int decoded = 0;
    std::int64_t k1_in_sample = 0;
    std::int64_t k2_in_sample = 0;
};

struct TrialStats {
    std::int64_t trials = 0;
    std::int64_t sent0 = 0, sent1 = 0;
    std::int64_t correct0 = 0, correct1 = 0;
    double p_correct_0 = 0, p_correct_1 = 0;
    double ber = 0;
    // 99% normal-approximation confidence half-widths
    double ci_half_0 = 0, ci_half_1 = 0, ci_half_ber = 0;
    bool used_binomial_sampler = false;
};

// One seeded trial: draw the sent bit equiprobably, draw the sample
// composition from the reservoir's distribution, decode. Trial (seed, index)
// is reproducible in isolation; run_trials produces exactly these outcomes.
TrialOutcome run_single_trial(const IntegerReservoirState& state, const TransmitterConfig& cfg,
                              std::uint64_t seed, std::uint64_t trial_index);

// n_trials seeded trials. Sampling is exact inverse-CDF on the hypergeometric
// pmf for n_release <= 1e4 and falls back to a binomial approximation above
// that (flagged in the result). Each trial derives its substream from
// (seed, trial index) so the tallies are bit-identical for any thread count.
// threads <= 0 picks a hardware-based default.
TrialStats run_trials(const IntegerReservoirState& state, const TransmitterConfig& cfg,
                      std::int64_t n_trials, std::uint64_t seed, int threads = 0);

} // namespace moskalloc
