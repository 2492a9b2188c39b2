#pragma once

// Two-reservoir transmitter thermodynamics: the free-energy cost of purifying
// the reservoirs by moving molecules against the concentration gradient, the
// inversion from an energy budget back to the moved count, and the resulting
// mole fractions.

namespace moskalloc {

struct Environment {
    double boltzmann_constant = 1.3807e-23; // J/K
    double temperature = 298.15;            // K

    double kT() const { return boltzmann_constant * temperature; }
    void validate() const; // throws std::invalid_argument
};

// One transmitter: two molecule stores plus the per-bit release size.
// Counts are stored as doubles so configs can say "6e8", but they must be
// integral; validate() enforces that.
struct TransmitterConfig {
    double n_low = 0;     // molecules in the low (k2-depleted) reservoir
    double n_high = 0;    // molecules in the high (k2-enriched) reservoir
    double c_init = 0.5;  // initial mole fraction of species k2 in both
    double n_release = 0; // molecules released per bit

    double n_total() const { return n_low + n_high; }
    // release sizes are conventionally odd so a half-half split cannot tie;
    // even values are accepted and simply make ties possible
    bool release_count_is_odd() const;
    void validate() const; // throws std::invalid_argument
};

// Post-move composition plus the diagnostics of the small-move expansion.
struct ReservoirFractions {
    double c_low = 0;  // k2 fraction left in the low reservoir
    double c_high = 0; // k2 fraction in the high reservoir
    double moved = 0;  // molecules transferred, real-valued
    double alpha = 0;  // 2*moved / n_total
    double beta = 0;   // alpha / c_init, the small-move expansion variable
    double psi = 0;    // c_init / (kT * n_low), 1/J

    // the inversion from energy to moved count truncates a series whose next
    // term is O(beta^2); past beta = 0.1 the truncation is no longer small
    bool within_small_move_domain() const { return beta <= 0.1; }
};

// Exact free-energy cost of moving `moved` k2 molecules from the low to the
// high reservoir. Works for n_low != n_high; reduces to the symmetric
// closed form when they match. Throws std::domain_error if the move would
// drain the low reservoir of k2 or overfill the high one.
double energy_cost_exact(const TransmitterConfig& cfg, const Environment& env, double moved);

// Small-move inversion: the moved count that a free-energy budget `energy`
// buys, m = sqrt(c_init * n_total * energy / (2 kT)). Monotone increasing in
// energy. Throws std::domain_error when psi * energy >= c_init^2, the region
// where the truncated series (and the transmitter itself) breaks down.
double moved_from_energy(const TransmitterConfig& cfg, const Environment& env, double energy);

// Compose moved_from_energy with species bookkeeping: c_low = c - m/n_low,
// c_high = c + m/n_high, which conserves total k2 exactly for any reservoir
// sizes. Diagnostics alpha, beta, psi are filled in.
ReservoirFractions fractions_after_energy(const TransmitterConfig& cfg, const Environment& env,
                                          double energy);

// Largest energy this transmitter can absorb: the strict bound from
// psi * e < c_init^2 together with the depletion/overfill limits on the
// moved count. Energies strictly below the returned value are valid.
double max_valid_energy(const TransmitterConfig& cfg, const Environment& env);

} // namespace moskalloc
