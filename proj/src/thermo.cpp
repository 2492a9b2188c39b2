#include "moskalloc/thermo.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace moskalloc {

namespace {

bool is_count(double v) {
    return std::isfinite(v) && v >= 1 && v == std::floor(v) && v <= 9.007199254740992e15;
}

[[noreturn]] void fail_domain(const std::string& what) { throw std::domain_error(what); }

} // namespace

void Environment::validate() const {
    if (!(boltzmann_constant > 0) || !std::isfinite(boltzmann_constant))
        throw std::invalid_argument("boltzmann_constant must be positive");
    if (!(temperature > 0) || !std::isfinite(temperature))
        throw std::invalid_argument("temperature must be positive");
}

bool TransmitterConfig::release_count_is_odd() const {
    return std::fmod(n_release, 2.0) == 1.0;
}

void TransmitterConfig::validate() const {
    if (!is_count(n_low)) throw std::invalid_argument("n_low must be an integer >= 1");
    if (!is_count(n_high)) throw std::invalid_argument("n_high must be an integer >= 1");
    if (!(c_init > 0 && c_init < 1))
        throw std::invalid_argument("c_init must lie strictly between 0 and 1");
    if (!is_count(n_release)) throw std::invalid_argument("n_release must be an integer >= 1");
    if (n_release > n_low || n_release > n_high)
        throw std::invalid_argument("n_release cannot exceed either reservoir");
}

double energy_cost_exact(const TransmitterConfig& cfg, const Environment& env, double moved) {
    cfg.validate();
    env.validate();
    if (!(moved >= 0) || !std::isfinite(moved))
        fail_domain("moved count must be finite and non-negative");

    const double c = cfg.c_init;
    const double d_low = moved / cfg.n_low;   // k2 fraction lost by the low reservoir
    const double d_high = moved / cfg.n_high; // k2 fraction gained by the high one
    if (d_low > c) {
        std::ostringstream os;
        os << "moving " << moved << " molecules drains the low reservoir (max " << c * cfg.n_low
           << ")";
        fail_domain(os.str());
    }
    if (d_high > 1 - c) {
        std::ostringstream os;
        os << "moving " << moved << " molecules overfills the high reservoir (max "
           << (1 - c) * cfg.n_high << ")";
        fail_domain(os.str());
    }

    // Mixing-entropy difference written so each reservoir contributes
    //   n * [ +-d*ln(c) + (c +- d) * log1p(+-d/c) ],
    // which is exactly 0 at moved = 0 and stable for small moves.
    const double log_c = std::log(c);
    const double high_part = d_high * log_c + (c + d_high) * std::log1p(d_high / c);
    const double low_mix = (c - d_low <= 0) ? 0.0 : (c - d_low) * std::log1p(-d_low / c);
    const double low_part = -d_low * log_c + low_mix;
    double e = env.kT() * (cfg.n_high * high_part + cfg.n_low * low_part);
    return e < 0 ? 0.0 : e; // clamp FP dust at tiny moves
}

double moved_from_energy(const TransmitterConfig& cfg, const Environment& env, double energy) {
    cfg.validate();
    env.validate();
    if (!(energy >= 0) || !std::isfinite(energy))
        fail_domain("energy must be finite and non-negative");

    const double c = cfg.c_init;
    const double psi = c / (env.kT() * cfg.n_low);
    if (!(psi * energy < c * c)) {
        std::ostringstream os;
        os << "energy " << energy << " J outside the valid domain: psi*e = " << psi * energy
           << " >= c_init^2 = " << c * c;
        fail_domain(os.str());
    }
    const double m = std::sqrt(c * cfg.n_total() * energy / (2.0 * env.kT()));
    // the psi guard covers the symmetric case; asymmetric reservoirs need the
    // physical limits checked on m directly
    if (m > c * cfg.n_low)
        fail_domain("energy implies a move draining the low reservoir");
    if (m > (1 - c) * cfg.n_high)
        fail_domain("energy implies a move overfilling the high reservoir");
    return m;
}

ReservoirFractions fractions_after_energy(const TransmitterConfig& cfg, const Environment& env,
                                          double energy) {
    const double m = moved_from_energy(cfg, env, energy);
    const double c = cfg.c_init;
    ReservoirFractions fr;
    fr.moved = m;
    fr.c_low = c - m / cfg.n_low;
    fr.c_high = c + m / cfg.n_high;
    fr.alpha = 2.0 * m / cfg.n_total();
    fr.beta = fr.alpha / c;
    fr.psi = c / (env.kT() * cfg.n_low);
    return fr;
}

double max_valid_energy(const TransmitterConfig& cfg, const Environment& env) {
    cfg.validate();
    env.validate();
    const double c = cfg.c_init;
    const double kt = env.kT();
    const double e_guard = c * c * kt * cfg.n_low / c; // psi*e < c^2
    // m = sqrt(c * n_total * e / (2 kT)) kept below the depletion/overfill limits
    const double m_low = c * cfg.n_low;
    const double m_high = (1 - c) * cfg.n_high;
    const double m_cap = m_low < m_high ? m_low : m_high;
    const double e_move = 2.0 * kt * m_cap * m_cap / (c * cfg.n_total());
    return e_guard < e_move ? e_guard : e_move;
}

} // namespace moskalloc
