#include "moskalloc/ber.hpp"

#include <cmath>
#include <stdexcept>

namespace moskalloc {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double std_normal_sf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) * 0.39894228040143267793994605993438;
}

std::int64_t bit0_count_threshold(const TransmitterConfig& cfg) {
    // decode-0 rule is k1 >= n_release*(1-c), inclusive
    return static_cast<std::int64_t>(std::ceil(cfg.n_release * (1.0 - cfg.c_init)));
}

std::int64_t bit1_count_threshold(const TransmitterConfig& cfg) {
    return static_cast<std::int64_t>(std::floor(cfg.n_release * cfg.c_init)) + 1;
}

SelectionStats selection_stats(const TransmitterConfig& cfg, const ReservoirFractions& fr) {
    const double nm = cfg.n_release;
    SelectionStats s;
    s.mu0 = nm * (1.0 - fr.c_low);
    s.sigma0 = std::sqrt(nm * fr.c_low * (1.0 - fr.c_low));
    s.mu1 = nm * fr.c_high;
    s.sigma1 = std::sqrt(nm * fr.c_high * (1.0 - fr.c_high));
    return s;
}

namespace {

struct TailPieces {
    double miss_above; // normal mass beyond the full sample size
    double miss_below; // mass under the decision boundary
};

// bit 0: k1 ~ N(mu0, sigma0), correct band is [boundary, n_release]
TailPieces bit0_pieces(const TransmitterConfig& cfg, const ReservoirFractions& fr,
                       ThresholdMode mode) {
    if (!(fr.c_low > 0 && fr.c_low < 1))
        throw std::domain_error("degenerate low reservoir (c_low at 0 or 1): normal model "
                                "undefined, use the exact tails");
    const SelectionStats s = selection_stats(cfg, fr);
    const double nm = cfg.n_release;
    // integer mode plugs in the floor(..)+1 convention of the exact tail sums,
    // which at an integral boundary sits one count above the inclusive
    // decode-0 rule; the difference is a single pmf term
    const double boundary = mode == ThresholdMode::continuous
                                ? nm * (1.0 - cfg.c_init)
                                : std::floor(nm * (1.0 - cfg.c_init)) + 1.0;
    return {std_normal_sf((nm - s.mu0) / s.sigma0),
            std_normal_cdf((boundary - s.mu0) / s.sigma0)};
}

TailPieces bit1_pieces(const TransmitterConfig& cfg, const ReservoirFractions& fr,
                       ThresholdMode mode) {
    if (!(fr.c_high > 0 && fr.c_high < 1))
        throw std::domain_error("degenerate high reservoir (c_high at 0 or 1): normal model "
                                "undefined, use the exact tails");
    const SelectionStats s = selection_stats(cfg, fr);
    const double nm = cfg.n_release;
    const double boundary = mode == ThresholdMode::continuous
                                ? nm * cfg.c_init
                                : std::floor(nm * cfg.c_init) + 1;
    return {std_normal_sf((nm - s.mu1) / s.sigma1),
            std_normal_cdf((boundary - s.mu1) / s.sigma1)};
}

} // namespace

double p_correct_bit0(const TransmitterConfig& cfg, const ReservoirFractions& fr,
                      ThresholdMode mode) {
    const TailPieces t = bit0_pieces(cfg, fr, mode);
    return 1.0 - t.miss_above - t.miss_below;
}

double p_correct_bit1(const TransmitterConfig& cfg, const ReservoirFractions& fr,
                      ThresholdMode mode) {
    const TailPieces t = bit1_pieces(cfg, fr, mode);
    return 1.0 - t.miss_above - t.miss_below;
}

BerReport transmitter_ber(const TransmitterConfig& cfg, const Environment& env, double energy,
                          ThresholdMode mode) {
    const ReservoirFractions fr = fractions_after_energy(cfg, env, energy);
    const TailPieces t0 = bit0_pieces(cfg, fr, mode);
    const TailPieces t1 = bit1_pieces(cfg, fr, mode);
    BerReport r;
    r.p_correct_0 = 1.0 - t0.miss_above - t0.miss_below;
    r.p_correct_1 = 1.0 - t1.miss_above - t1.miss_below;
    r.ber = 0.5 * (t0.miss_above + t0.miss_below + t1.miss_above + t1.miss_below);
    return r;
}

double two_user_total_ber(double rho, double e_total, const TransmitterConfig& cfg1,
                          const TransmitterConfig& cfg2, const Environment& env) {
    if (!(rho > 0 && rho < 1)) throw std::domain_error("rho must lie strictly inside (0, 1)");
    if (!(e_total > 0)) throw std::domain_error("e_total must be positive");
    return transmitter_ber(cfg1, env, rho * e_total).ber +
           transmitter_ber(cfg2, env, (1.0 - rho) * e_total).ber;
}

namespace {

// d/dx of one user's BER contribution at share x of the budget, for the
// c = 1/2 symmetric-reservoir regime where the shift is s = sqrt(psi*x*E)
// and the variance factor is q = 1/4 - psi*x*E.
double share_derivative(double x, double e_total, const TransmitterConfig& cfg,
                        const Environment& env) {
    const double nm = cfg.n_release;
    const double psi = cfg.c_init / (env.kT() * cfg.n_low);
    const double pe = psi * x * e_total;
    const double q = 0.25 - pe;
    if (!(q > 0))
        throw std::domain_error("variance term 1/4 - psi*rho*E non-positive: derivative "
                                "undefined at this share");
    const double s = std::sqrt(pe);
    const double root_npe = std::sqrt(nm * psi * e_total);
    const double b = std::sqrt(nm * (0.5 - s) / (0.5 + s));
    const double t_boundary = 0.25 * std_normal_pdf(b) * root_npe / (std::sqrt(x * q) * (0.5 + s));
    const double u = std::sqrt(nm * pe / q);
    const double t_top = 0.125 * std_normal_pdf(u) * root_npe / (std::sqrt(x) * q * std::sqrt(q));
    return t_boundary - t_top;
}

} // namespace

double two_user_ber_derivative(double rho, double e_total, const TransmitterConfig& cfg1,
                               const TransmitterConfig& cfg2, const Environment& env) {
    if (!(rho > 0 && rho < 1)) throw std::domain_error("rho must lie strictly inside (0, 1)");
    if (!(e_total > 0)) throw std::domain_error("e_total must be positive");
    for (const TransmitterConfig* cfg : {&cfg1, &cfg2}) {
        cfg->validate();
        if (cfg->c_init != 0.5 || cfg->n_low != cfg->n_high)
            throw std::domain_error("closed-form derivative requires c_init = 1/2 and equal "
                                    "reservoirs for both users");
    }
    env.validate();
    return share_derivative(rho, e_total, cfg1, env) -
           share_derivative(1.0 - rho, e_total, cfg2, env);
}

} // namespace moskalloc
