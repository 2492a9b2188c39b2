#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "moskalloc/ber.hpp"
#include "moskalloc/exact.hpp"
#include "moskalloc/thermo.hpp"

using namespace moskalloc;

namespace {

TransmitterConfig default_user() {
    TransmitterConfig u;
    u.n_low = 6e8;
    u.n_high = 6e8;
    u.c_init = 0.5;
    u.n_release = 4e4;
    return u;
}

const Environment kEnv{};

// exact in double for the small arguments used here
double choose(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (std::int64_t i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

double enumerated_tail(std::int64_t population, std::int64_t successes, std::int64_t draws,
                       std::int64_t threshold) {
    double hits = 0.0;
    for (std::int64_t k = threshold; k <= draws; ++k)
        hits += choose(successes, k) * choose(population - successes, draws - k);
    return hits / choose(population, draws);
}

} // namespace

TEST_CASE("tail of the small exhaustive instance") {
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
    CHECK(got == doctest::Approx(10912.0 / 15504.0).epsilon(1e-13));
    CHECK(got == doctest::Approx(enumerated_tail(20, 12, 5, 3)).epsilon(1e-13));
}

TEST_CASE("survival function matches frozen reference") {
    CHECK(hypergeom_sf(5000, 2600, 301, 151) ==
          doctest::Approx(0.76321537467816692).epsilon(1e-12));
}

TEST_CASE("survival function edge thresholds") {
    CHECK(hypergeom_sf(100, 60, 10, 0) == 1.0);
    CHECK(hypergeom_sf(100, 60, 10, -5) == 1.0);
    CHECK(hypergeom_sf(100, 60, 10, 11) == 0.0);
    CHECK(hypergeom_sf(100, 60, 10, 10) ==
          doctest::Approx(enumerated_tail(100, 60, 10, 10)).epsilon(1e-12));
    // draws can exceed the complement, forcing a positive support floor
    CHECK(hypergeom_sf(100, 95, 10, 5) == 1.0);
}

TEST_CASE("survival function is symmetric in draws and successes") {
    for (std::int64_t t : {20, 35, 50}) {
        const double a = hypergeom_sf(10000, 4800, 101, t);
        const double b = hypergeom_sf(10000, 101, 4800, t);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("survival function falls as the threshold rises") {
    double prev = 1.1;
    for (std::int64_t t = 140; t <= 165; ++t) {
        const double s = hypergeom_sf(5000, 2600, 301, t);
        CHECK(s < prev);
        prev = s;
    }
}

TEST_CASE("survival differences reproduce the mass function") {
    for (std::int64_t k : {145, 151, 158}) {
        const double diff =
            hypergeom_sf(5000, 2600, 301, k) - hypergeom_sf(5000, 2600, 301, k + 1);
        CHECK(diff == doctest::Approx(hypergeom_pmf(5000, 2600, 301, k)).epsilon(1e-10));
    }
}

TEST_CASE("tails match enumeration on small instances") {
    for (std::int64_t shift : {0, 1, 3}) {
        for (double nm : {3.0, 5.0, 7.0}) {
            TransmitterConfig u;
            u.n_low = u.n_high = 24;
            u.c_init = 0.5;
            u.n_release = nm;
            IntegerReservoirState st;
            st.k1_low = 12 + shift;
            st.k2_low = 12 - shift;
            st.k1_high = 12 - shift;
            st.k2_high = 12 + shift;
            const std::int64_t t0 = bit0_count_threshold(u);
            const std::int64_t t1 = bit1_count_threshold(u);
            CHECK(hypergeom_tail_bit0(st, u) ==
                  doctest::Approx(enumerated_tail(24, st.k1_low, static_cast<std::int64_t>(nm), t0))
                      .epsilon(1e-12));
            CHECK(hypergeom_tail_bit1(st, u) ==
                  doctest::Approx(enumerated_tail(24, st.k2_high, static_cast<std::int64_t>(nm), t1))
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("tail agreement at the scaled instance") {
    TransmitterConfig u;
    u.n_low = u.n_high = 2e5;
    u.c_init = 0.5;
    u.n_release = 2001;
    IntegerReservoirState st;
    st.k1_low = 102000;
    st.k2_low = 98000;
    st.k1_high = 98000;
    st.k2_high = 102000;
    const double exact = hypergeom_tail_bit0(st, u);
    CHECK(exact == doctest::Approx(0.81576981905892882).epsilon(1e-12));
    ReservoirFractions fr;
    fr.c_low = 0.49;
    fr.c_high = 0.51;
    CHECK(std::abs(p_correct_bit0(u, fr, ThresholdMode::continuous) - exact) <= 1e-2);
    CHECK(std::abs(p_correct_bit0(u, fr, ThresholdMode::integer) - exact) <= 1e-2);
}

TEST_CASE("pure reservoirs never misdecode") {
    TransmitterConfig u;
    u.n_low = u.n_high = 1000;
    u.c_init = 0.5;
    u.n_release = 101;
    IntegerReservoirState st;
    st.k1_low = 1000;
    st.k2_low = 0;
    st.k1_high = 0;
    st.k2_high = 1000;
    CHECK(hypergeom_tail_bit0(st, u) == 1.0);
    CHECK(hypergeom_tail_bit1(st, u) == 1.0);
    const TrialStats stats = run_trials(st, u, 20000, 9);
    CHECK(stats.ber == 0.0);
    CHECK_FALSE(stats.used_binomial_sampler);
}

TEST_CASE("integer state construction from spent energy") {
    const TransmitterConfig u = default_user();
    const IntegerReservoirState st = build_state(u, kEnv, 2e-16);
    CHECK(st.k1_low == 303817759);
    CHECK(st.k2_low == 296182241);
    CHECK(st.k1_high == 296182241);
    CHECK(st.k2_high == 303817759);
    CHECK(st.n_low() == 600000000);
    CHECK(st.n_high() == 600000000);

    const IntegerReservoirState rest = build_state(u, kEnv, 0.0);
    CHECK(rest.k1_low == 300000000);
    CHECK(rest.k2_low == 300000000);
}

TEST_CASE("state construction conserves both species") {
    const TransmitterConfig u = default_user();
    const double cap = max_valid_energy(u, kEnv);
    for (int i = 0; i < 100; ++i) {
        const double e = cap * 1e-9 * std::pow(1.2, i % 40) * (1 + i);
        if (!(e < cap)) continue;
        const IntegerReservoirState st = build_state(u, kEnv, e);
        CHECK(st.k1_low + st.k1_high == 600000000);
        CHECK(st.k2_low + st.k2_high == 600000000);
        CHECK(st.n_low() == 600000000);
    }
}

TEST_CASE("negative counts are rejected") {
    IntegerReservoirState st;
    st.k1_low = -1;
    st.k2_low = 10;
    st.k1_high = 10;
    st.k2_high = 10;
    CHECK_THROWS_AS(st.validate(), std::invalid_argument);
}

TEST_CASE("exact sampler hits the expected draw mean") {
    TransmitterConfig u;
    u.n_low = u.n_high = 2e5;
    u.c_init = 0.5;
    u.n_release = 2001;
    IntegerReservoirState st;
    st.k1_low = 102000;
    st.k2_low = 98000;
    st.k1_high = 98000;
    st.k2_high = 102000;
    double sum = 0;
    std::int64_t n0 = 0;
    constexpr int kTrials = 100000;
    for (int t = 0; t < kTrials; ++t) {
        const TrialOutcome o = run_single_trial(st, u, 42, t);
        if (o.sent == 0) {
            sum += static_cast<double>(o.k1_in_sample);
            ++n0;
        }
    }
    const double mean = sum / static_cast<double>(n0);
    const double mu = 2001 * 0.51;
    const double sigma = std::sqrt(2001 * 0.51 * 0.49);
    CHECK(std::abs(mean - mu) <= 3 * sigma / std::sqrt(static_cast<double>(n0)));
}

TEST_CASE("trial runs are deterministic and thread-count independent") {
    TransmitterConfig u;
    u.n_low = u.n_high = 2e5;
    u.c_init = 0.5;
    u.n_release = 2001;
    IntegerReservoirState st;
    st.k1_low = 102000;
    st.k2_low = 98000;
    st.k1_high = 98000;
    st.k2_high = 102000;
    const TrialStats a = run_trials(st, u, 50000, 7, 1);
    const TrialStats b = run_trials(st, u, 50000, 7, 4);
    const TrialStats c = run_trials(st, u, 50000, 7);
    CHECK(a.correct0 == b.correct0);
    CHECK(a.correct1 == b.correct1);
    CHECK(a.sent0 == b.sent0);
    CHECK(a.correct0 == c.correct0);
    CHECK(a.correct1 == c.correct1);
    const TrialStats d = run_trials(st, u, 50000, 8);
    CHECK((d.correct0 != a.correct0 || d.correct1 != a.correct1));
}

TEST_CASE("large releases fall back to the binomial sampler") {
    const TransmitterConfig u = default_user();
    const IntegerReservoirState st = build_state(u, kEnv, 2e-16);
    const TrialStats stats = run_trials(st, u, 50000, 3);
    CHECK(stats.used_binomial_sampler);
    const double analytic = transmitter_ber(u, kEnv, 2e-16).ber;
    const double sigma = std::sqrt(analytic * (1 - analytic) / 50000.0);
    CHECK(std::abs(stats.ber - analytic) <= 4 * sigma);
}

TEST_CASE("zero-energy trials decode at chance") {
    const TransmitterConfig u = default_user();
    const IntegerReservoirState st = build_state(u, kEnv, 0.0);
    const TrialStats stats = run_trials(st, u, 200000, 5);
    const double sigma = std::sqrt(0.25 / 200000.0);
    CHECK(std::abs(stats.ber - 0.5) <= 3 * sigma);
    CHECK(stats.trials == 200000);
    CHECK(stats.sent0 + stats.sent1 == 200000);
}

TEST_CASE("confidence halfwidths are finite only for populated strata") {
    TransmitterConfig u;
    u.n_low = u.n_high = 1000;
    u.c_init = 0.5;
    u.n_release = 11;
    IntegerReservoirState st;
    st.k1_low = 600;
    st.k2_low = 400;
    st.k1_high = 400;
    st.k2_high = 600;
    const TrialStats one = run_trials(st, u, 1, 1);
    CHECK((one.sent0 == 0 || one.sent1 == 0));
    if (one.sent0 == 0) CHECK(std::isnan(one.ci_half_0));
    if (one.sent1 == 0) CHECK(std::isnan(one.ci_half_1));
    const TrialStats many = run_trials(st, u, 10000, 1);
    CHECK(std::isfinite(many.ci_half_0));
    CHECK(std::isfinite(many.ci_half_1));
    CHECK(std::isfinite(many.ci_half_ber));
    CHECK(many.ci_half_ber > 0);
}
