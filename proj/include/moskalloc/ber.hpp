#pragma once

#include <cstdint>

#include "moskalloc/thermo.hpp"

// Closed-form decision statistics under the normal approximation of the
// released-sample composition, per-transmitter BER, and the two-user
// rho-parameterized total BER with its closed-form derivative.
//
// Decision rule: a released sample of n_release molecules decodes as bit 0
// iff its k1 count is >= n_release * (1 - c_init); ties go to bit 0. Bit 1
// is decoded otherwise, so a bit-1 send is correct iff its k2 count is
// >= floor(n_release * c_init) + 1.

namespace moskalloc {

// standard normal CDF, complement-form evaluation: no cancellation in either
// tail, absolute error well under 1e-12 across [-8, 8]
double std_normal_cdf(double x);

// upper-tail probability P(Z >= x)
double std_normal_sf(double x);

double std_normal_pdf(double x);

// smallest integer k1 count that decodes as bit 0
std::int64_t bit0_count_threshold(const TransmitterConfig& cfg);
// smallest integer k2 count whose sample decodes as bit 1
std::int64_t bit1_count_threshold(const TransmitterConfig& cfg);

// Normal-model mean and spread of the molecule counts a receiver-free decoder
// looks at: k1 in a bit-0 release, k2 in a bit-1 release.
struct SelectionStats {
    double mu0 = 0;    // mean k1 count, bit-0 release from the low reservoir
    double sigma0 = 0;
    double mu1 = 0;    // mean k2 count, bit-1 release from the high reservoir
    double sigma1 = 0;
};

SelectionStats selection_stats(const TransmitterConfig& cfg, const ReservoirFractions& fr);

// Which threshold the analytic tail uses. `continuous` plugs the raw real
// boundary n_release*(1-c) (resp. n_release*c) into the normal CDF and is the
// default; `integer` uses the integer count thresholds above, for comparison
// against the exact tails.
enum class ThresholdMode { continuous, integer };

// P(decoded 0 | sent 0) under the normal model. Throws std::domain_error when
// c_low is 0 or 1 (degenerate sigma); use the exact module for those corners.
double p_correct_bit0(const TransmitterConfig& cfg, const ReservoirFractions& fr,
                      ThresholdMode mode = ThresholdMode::continuous);

// P(decoded 1 | sent 1), mirror case on the high reservoir.
double p_correct_bit1(const TransmitterConfig& cfg, const ReservoirFractions& fr,
                      ThresholdMode mode = ThresholdMode::continuous);

struct BerReport {
    double p_correct_0 = 0;
    double p_correct_1 = 0;
    double ber = 0; // 1 - (p_correct_0 + p_correct_1)/2, equiprobable bits
};

// Full analytic pipeline for one transmitter at one energy. The BER field is
// assembled from tail complements directly, so values near 1e-12 keep their
// relative accuracy instead of dissolving into 1 - (nearly 2)/2.
BerReport transmitter_ber(const TransmitterConfig& cfg, const Environment& env, double energy,
                          ThresholdMode mode = ThresholdMode::continuous);

// f(rho): total BER of two users splitting e_total as rho / (1 - rho).
// Requires 0 < rho < 1 and both shares inside the valid energy domain.
double two_user_total_ber(double rho, double e_total, const TransmitterConfig& cfg1,
                          const TransmitterConfig& cfg2, const Environment& env);

// g(rho) = f'(rho), closed form. Only derived for the simplified regime:
// both users need c_init = 1/2 and n_low = n_high (their release sizes and
// reservoir scales may differ). Throws std::domain_error outside that regime
// or where a variance term 1/4 - psi*rho*e_total would go non-positive.
double two_user_ber_derivative(double rho, double e_total, const TransmitterConfig& cfg1,
                               const TransmitterConfig& cfg2, const Environment& env);

} // namespace moskalloc
