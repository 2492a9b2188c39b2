#include "moskalloc/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "moskalloc/ber.hpp"
#include "moskalloc/rng.hpp"

namespace moskalloc {

void IntegerReservoirState::validate() const {
    if (k1_low < 0 || k2_low < 0 || k1_high < 0 || k2_high < 0)
        throw std::invalid_argument("reservoir counts must be non-negative");
    if (n_low() < 1 || n_high() < 1)
        throw std::invalid_argument("each reservoir needs at least one molecule");
}

IntegerReservoirState build_state(const TransmitterConfig& cfg, const Environment& env,
                                  double energy) {
    const ReservoirFractions fr = fractions_after_energy(cfg, env, energy);
    const std::int64_t m_int = std::llrint(fr.moved); // ties to even
    const std::int64_t n_low = static_cast<std::int64_t>(cfg.n_low);
    const std::int64_t n_high = static_cast<std::int64_t>(cfg.n_high);
    const std::int64_t base_low = std::llrint(cfg.c_init * cfg.n_low);
    const std::int64_t base_high = std::llrint(cfg.c_init * cfg.n_high);

    IntegerReservoirState st;
    st.k2_low = base_low - m_int;
    st.k2_high = base_high + m_int;
    st.k1_low = n_low - st.k2_low;
    st.k1_high = n_high - st.k2_high;
    if (st.k2_low < 0 || st.k1_high < 0) {
        std::ostringstream os;
        os << "integer move of " << m_int << " molecules empties a species (k2_low=" << st.k2_low
           << ", k1_high=" << st.k1_high << ")";
        throw std::domain_error(os.str());
    }
    st.validate();
    return st;
}

namespace {

double log_binom(double n, double k) {
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

struct Kahan {
    double sum = 0, c = 0;
    void add(double v) {
        double y = v - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

void check_hypergeom_args(std::int64_t population, std::int64_t successes, std::int64_t draws) {
    if (population < 1) throw std::domain_error("population must be >= 1");
    if (successes < 0 || successes > population)
        throw std::domain_error("successes must lie in [0, population]");
    if (draws < 1 || draws > population)
        throw std::domain_error("draws must lie in [1, population]");
}

} // namespace

double hypergeom_sf(std::int64_t population, std::int64_t successes, std::int64_t draws,
                    std::int64_t threshold) {
    check_hypergeom_args(population, successes, draws);
    const std::int64_t lo = std::max<std::int64_t>(0, draws - (population - successes));
    const std::int64_t hi = std::min(draws, successes);
    if (threshold <= lo) return 1.0;
    if (threshold > hi) return 0.0;

    // pmf ratio walk anchored at the mode, self-normalized over the support;
    // the anchor value cancels between tail and total, so no combinatorial
    // magnitude is ever materialized
    std::int64_t mode = static_cast<std::int64_t>(static_cast<double>(draws + 1) *
                                                  static_cast<double>(successes + 1) /
                                                  static_cast<double>(population + 2));
    mode = std::clamp(mode, lo, hi);

    const auto ratio_up = [&](std::int64_t i) {
        // pmf(i+1)/pmf(i)
        return (static_cast<double>(successes - i) * static_cast<double>(draws - i)) /
               (static_cast<double>(i + 1) *
                static_cast<double>(population - successes - draws + i + 1));
    };

    constexpr double kCut = 1e-22; // relative to the mode weight of 1
    Kahan tail, total;
    const auto deposit = [&](std::int64_t i, double w) {
        total.add(w);
        if (i >= threshold) tail.add(w);
    };

    deposit(mode, 1.0);
    double w = 1.0;
    for (std::int64_t i = mode; i < hi; ++i) {
        w *= ratio_up(i);
        if (w < kCut) break;
        deposit(i + 1, w);
    }
    w = 1.0;
    for (std::int64_t i = mode; i > lo; --i) {
        w /= ratio_up(i - 1);
        if (w < kCut) break;
        deposit(i - 1, w);
    }
    return tail.sum / total.sum;
}

double hypergeom_pmf(std::int64_t population, std::int64_t successes, std::int64_t draws,
                     std::int64_t k) {
    check_hypergeom_args(population, successes, draws);
    const std::int64_t lo = std::max<std::int64_t>(0, draws - (population - successes));
    const std::int64_t hi = std::min(draws, successes);
    if (k < lo || k > hi) return 0.0;
    const double lp = log_binom(static_cast<double>(successes), static_cast<double>(k)) +
                      log_binom(static_cast<double>(population - successes),
                                static_cast<double>(draws - k)) -
                      log_binom(static_cast<double>(population), static_cast<double>(draws));
    return std::exp(lp);
}

double hypergeom_tail_bit0(const IntegerReservoirState& state, const TransmitterConfig& cfg) {
    state.validate();
    cfg.validate();
    const std::int64_t nm = static_cast<std::int64_t>(cfg.n_release);
    if (nm > state.n_low())
        throw std::domain_error("release size exceeds the low reservoir");
    const std::int64_t threshold =
        static_cast<std::int64_t>(std::floor(cfg.n_release * (1.0 - cfg.c_init))) + 1;
    return hypergeom_sf(state.n_low(), state.k1_low, nm, threshold);
}

double hypergeom_tail_bit1(const IntegerReservoirState& state, const TransmitterConfig& cfg) {
    state.validate();
    cfg.validate();
    const std::int64_t nm = static_cast<std::int64_t>(cfg.n_release);
    if (nm > state.n_high())
        throw std::domain_error("release size exceeds the high reservoir");
    return hypergeom_sf(state.n_high(), state.k2_high, nm, bit1_count_threshold(cfg));
}

namespace {

// Inverse-CDF table over the integer support [lo, lo + cum.size() - 1].
struct SampleTable {
    std::int64_t lo = 0;
    std::vector<double> cum;

    std::int64_t draw(double u) const {
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        const std::int64_t idx =
            std::min<std::int64_t>(it - cum.begin(), static_cast<std::int64_t>(cum.size()) - 1);
        return lo + idx;
    }
};

// Shared builder: walk unnormalized pmf weights outward from the mode via the
// ratio function, drop the far tails below 1e-22 of the mode, normalize,
// prefix-sum in increasing-k order.
template <typename RatioUp>
SampleTable build_table(std::int64_t lo, std::int64_t hi, std::int64_t mode, RatioUp ratio_up) {
    constexpr double kCut = 1e-22;
    std::int64_t first = mode, last = mode;
    std::vector<double> up, down;
    double w = 1.0;
    for (std::int64_t i = mode; i < hi; ++i) {
        w *= ratio_up(i);
        if (w < kCut) break;
        up.push_back(w);
        last = i + 1;
    }
    w = 1.0;
    for (std::int64_t i = mode; i > lo; --i) {
        w /= ratio_up(i - 1);
        if (w < kCut) break;
        down.push_back(w);
        first = i - 1;
    }

    SampleTable t;
    t.lo = first;
    t.cum.resize(static_cast<std::size_t>(last - first + 1));
    for (std::size_t j = 0; j < down.size(); ++j)
        t.cum[down.size() - 1 - j] = down[j];
    t.cum[down.size()] = 1.0;
    for (std::size_t j = 0; j < up.size(); ++j)
        t.cum[down.size() + 1 + j] = up[j];

    Kahan total;
    for (double v : t.cum) total.add(v);
    double running = 0;
    for (double& v : t.cum) {
        running += v / total.sum;
        v = running;
    }
    t.cum.back() = 1.0;
    return t;
}

SampleTable make_hypergeom_table(std::int64_t population, std::int64_t successes,
                                 std::int64_t draws) {
    const std::int64_t lo = std::max<std::int64_t>(0, draws - (population - successes));
    const std::int64_t hi = std::min(draws, successes);
    std::int64_t mode = std::clamp(static_cast<std::int64_t>(static_cast<double>(draws + 1) *
                                                             static_cast<double>(successes + 1) /
                                                             static_cast<double>(population + 2)),
                                   lo, hi);
    return build_table(lo, hi, mode, [=](std::int64_t i) {
        return (static_cast<double>(successes - i) * static_cast<double>(draws - i)) /
               (static_cast<double>(i + 1) *
                static_cast<double>(population - successes - draws + i + 1));
    });
}

SampleTable make_binomial_table(std::int64_t n, double p) {
    if (p <= 0.0) return SampleTable{0, {1.0}};
    if (p >= 1.0) return SampleTable{n, {1.0}};
    const double odds = p / (1.0 - p);
    std::int64_t mode = std::clamp<std::int64_t>(
        static_cast<std::int64_t>(std::floor((static_cast<double>(n) + 1) * p)), 0, n);
    return build_table(0, n, mode, [=](std::int64_t i) {
        return static_cast<double>(n - i) / static_cast<double>(i + 1) * odds;
    });
}

constexpr std::int64_t kExactSamplerMaxDraws = 10000;

struct Simulator {
    SampleTable bit0_k1; // k1 count of a low-reservoir release
    SampleTable bit1_k2; // k2 count of a high-reservoir release
    std::int64_t nm;
    std::int64_t decode0_min_k1; // inclusive decode-0 rule on the k1 count
    bool binomial = false;

    Simulator(const IntegerReservoirState& st, const TransmitterConfig& cfg) {
        st.validate();
        cfg.validate();
        nm = static_cast<std::int64_t>(cfg.n_release);
        if (nm > st.n_low() || nm > st.n_high())
            throw std::domain_error("release size exceeds a reservoir");
        decode0_min_k1 = bit0_count_threshold(cfg);
        binomial = nm > kExactSamplerMaxDraws;
        if (binomial) {
            bit0_k1 = make_binomial_table(nm, static_cast<double>(st.k1_low) /
                                                  static_cast<double>(st.n_low()));
            bit1_k2 = make_binomial_table(nm, static_cast<double>(st.k2_high) /
                                                  static_cast<double>(st.n_high()));
        } else {
            bit0_k1 = make_hypergeom_table(st.n_low(), st.k1_low, nm);
            bit1_k2 = make_hypergeom_table(st.n_high(), st.k2_high, nm);
        }
    }

    // stream use per trial: one word for the bit, one unit draw for the sample
    TrialOutcome trial(std::uint64_t seed, std::uint64_t index) const {
        SplitMix64 rng = substream(seed, index);
        TrialOutcome out;
        out.sent = static_cast<int>(rng.next() >> 63);
        const double u = rng.next_unit();
        if (out.sent == 0) {
            out.k1_in_sample = bit0_k1.draw(u);
        } else {
            out.k2_in_sample = bit1_k2.draw(u);
            out.k1_in_sample = nm - out.k2_in_sample;
        }
        out.k2_in_sample = nm - out.k1_in_sample;
        out.decoded = out.k1_in_sample >= decode0_min_k1 ? 0 : 1;
        return out;
    }
};

constexpr double kZ99 = 2.5758293035489004; // two-sided 99% normal quantile

double half_width(double p, std::int64_t n) {
    if (n <= 0) return std::numeric_limits<double>::quiet_NaN();
    return kZ99 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

} // namespace

TrialOutcome run_single_trial(const IntegerReservoirState& state, const TransmitterConfig& cfg,
                              std::uint64_t seed, std::uint64_t trial_index) {
    return Simulator(state, cfg).trial(seed, trial_index);
}

TrialStats run_trials(const IntegerReservoirState& state, const TransmitterConfig& cfg,
                      std::int64_t n_trials, std::uint64_t seed, int threads) {
    if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
    const Simulator sim(state, cfg);

    int nthreads = threads;
    if (nthreads <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        nthreads = static_cast<int>(std::clamp(hw, 1u, 8u));
    }
    nthreads = static_cast<int>(
        std::min<std::int64_t>(nthreads, std::max<std::int64_t>(1, n_trials / 4096 + 1)));

    struct Tally {
        std::int64_t sent0 = 0, sent1 = 0, correct0 = 0, correct1 = 0;
    };
    std::vector<Tally> tallies(static_cast<std::size_t>(nthreads));
    const std::int64_t chunk = (n_trials + nthreads - 1) / nthreads;

    auto work = [&](int t) {
        const std::int64_t begin = t * chunk;
        const std::int64_t end = std::min(n_trials, begin + chunk);
        Tally& tl = tallies[static_cast<std::size_t>(t)];
        for (std::int64_t i = begin; i < end; ++i) {
            const TrialOutcome o = sim.trial(seed, static_cast<std::uint64_t>(i));
            if (o.sent == 0) {
                ++tl.sent0;
                tl.correct0 += o.decoded == 0;
            } else {
                ++tl.sent1;
                tl.correct1 += o.decoded == 1;
            }
        }
    };

    if (nthreads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }

    TrialStats st;
    st.trials = n_trials;
    for (const Tally& tl : tallies) {
        st.sent0 += tl.sent0;
        st.sent1 += tl.sent1;
        st.correct0 += tl.correct0;
        st.correct1 += tl.correct1;
    }
    st.used_binomial_sampler = sim.binomial;
    st.p_correct_0 = st.sent0 ? static_cast<double>(st.correct0) / st.sent0
                              : std::numeric_limits<double>::quiet_NaN();
    st.p_correct_1 = st.sent1 ? static_cast<double>(st.correct1) / st.sent1
                              : std::numeric_limits<double>::quiet_NaN();
    const std::int64_t wrong = (st.sent0 - st.correct0) + (st.sent1 - st.correct1);
    st.ber = static_cast<double>(wrong) / static_cast<double>(n_trials);
    st.ci_half_0 = half_width(st.p_correct_0, st.sent0);
    st.ci_half_1 = half_width(st.p_correct_1, st.sent1);
    st.ci_half_ber = half_width(st.ber, n_trials);
    return st;
}

} // namespace moskalloc
