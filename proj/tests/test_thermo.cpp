#include "doctest.h"

#include <cmath>
#include <stdexcept>

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

} // namespace

TEST_CASE("environment thermal scale") {
    CHECK(kEnv.kT() == doctest::Approx(4.11655705e-21).epsilon(1e-14));
    Environment bad;
    bad.temperature = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.temperature = 298.15;
    bad.boltzmann_constant = -1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("transmitter config validation") {
    TransmitterConfig u = default_user();
    CHECK_NOTHROW(u.validate());
    CHECK(u.n_total() == doctest::Approx(1.2e9));
    CHECK_FALSE(u.release_count_is_odd());
    u.n_release = 5;
    CHECK(u.release_count_is_odd());

    u = default_user();
    u.n_low = 0;
    CHECK_THROWS_AS(u.validate(), std::invalid_argument);
    u = default_user();
    u.n_high = 2.5;
    CHECK_THROWS_AS(u.validate(), std::invalid_argument);
    u = default_user();
    u.c_init = 0;
    CHECK_THROWS_AS(u.validate(), std::invalid_argument);
    u.c_init = 1;
    CHECK_THROWS_AS(u.validate(), std::invalid_argument);
    u = default_user();
    u.n_release = 0;
    CHECK_THROWS_AS(u.validate(), std::invalid_argument);
    u.n_release = 1.5;
    CHECK_THROWS_AS(u.validate(), std::invalid_argument);
}

TEST_CASE("small-move inversion matches frozen references") {
    const TransmitterConfig u = default_user();
    const ReservoirFractions fr = fractions_after_energy(u, kEnv, 2e-16);
    CHECK(fr.moved == doctest::Approx(3817759.4069452983).epsilon(1e-13));
    CHECK(fr.alpha == doctest::Approx(0.0063629323449088305).epsilon(1e-13));
    CHECK(fr.beta == doctest::Approx(0.012725864689817661).epsilon(1e-13));
    CHECK(fr.c_low == doctest::Approx(0.49363706765509117).epsilon(1e-14));
    CHECK(fr.c_high == doctest::Approx(0.50636293234490883).epsilon(1e-14));
    CHECK(fr.psi == doctest::Approx(202434540129.43494).epsilon(1e-13));
    CHECK(fr.within_small_move_domain());

    CHECK(moved_from_energy(u, kEnv, 1e-17) ==
          doctest::Approx(853676.95556689698).epsilon(1e-13));
}

TEST_CASE("zero move costs exactly zero") {
    const TransmitterConfig u = default_user();
    CHECK(energy_cost_exact(u, kEnv, 0.0) == 0.0);
    CHECK(moved_from_energy(u, kEnv, 0.0) == 0.0);
    const ReservoirFractions fr = fractions_after_energy(u, kEnv, 0.0);
    CHECK(fr.c_low == 0.5);
    CHECK(fr.c_high == 0.5);
}

TEST_CASE("energy cost agrees with the symmetric mixing form") {
    const TransmitterConfig u = default_user();
    for (double m : {1e3, 1e5, 3817759.4069452983, 2e7}) {
        const double d = m / u.n_low;
        const double expected =
            kEnv.kT() * u.n_low *
            ((0.5 + d) * std::log1p(2 * d) + (0.5 - d) * std::log1p(-2 * d));
        CHECK(energy_cost_exact(u, kEnv, m) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("roundtrip error stays within the quadratic correction") {
    const TransmitterConfig u = default_user();
    for (double e : {1e-18, 1e-17, 1e-16, 2e-16, 3e-16}) {
        const ReservoirFractions fr = fractions_after_energy(u, kEnv, e);
        const double back = energy_cost_exact(u, kEnv, fr.moved);
        CHECK(std::abs(back - e) / e <= fr.beta * fr.beta);
    }
}

TEST_CASE("species conservation holds for asymmetric reservoirs") {
    TransmitterConfig u;
    u.n_low = 4e8;
    u.n_high = 9e8;
    u.c_init = 0.3;
    u.n_release = 1001;
    const double budget = u.c_init * u.n_total();
    for (double e : {1e-18, 1e-17, 1e-16, 5e-16}) {
        const ReservoirFractions fr = fractions_after_energy(u, kEnv, e);
        const double lhs = u.n_low * fr.c_low + u.n_high * fr.c_high;
        CHECK(lhs == doctest::Approx(budget).epsilon(1e-13));
        CHECK(fr.c_low < u.c_init);
        CHECK(fr.c_high > u.c_init);
    }
}

TEST_CASE("move scales as the square root of energy") {
    const TransmitterConfig u = default_user();
    const double m1 = moved_from_energy(u, kEnv, 1e-16);
    const double m2 = moved_from_energy(u, kEnv, 2e-16);
    CHECK(m2 / m1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    TransmitterConfig big = u;
    big.n_low = 4 * u.n_low;
    big.n_high = 4 * u.n_high;
    const ReservoirFractions fr_small = fractions_after_energy(u, kEnv, 1e-16);
    const ReservoirFractions fr_big = fractions_after_energy(big, kEnv, 1e-16);
    const double shift_small = u.c_init - fr_small.c_low;
    const double shift_big = big.c_init - fr_big.c_low;
    CHECK(shift_small / shift_big == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("separation grows with spent energy") {
    const TransmitterConfig u = default_user();
    double prev = 0;
    for (double e : {1e-18, 1e-17, 1e-16, 1e-15, 1e-14}) {
        const ReservoirFractions fr = fractions_after_energy(u, kEnv, e);
        const double gap = fr.c_high - fr.c_low;
        CHECK(gap > prev);
        prev = gap;
    }
}

TEST_CASE("large moves leave the small-move domain") {
    const TransmitterConfig u = default_user();
    CHECK(fractions_after_energy(u, kEnv, 2e-16).within_small_move_domain());
    CHECK_FALSE(fractions_after_energy(u, kEnv, 2e-14).within_small_move_domain());
}

TEST_CASE("energy limit guards the inversion") {
    const TransmitterConfig u = default_user();
    const double cap = max_valid_energy(u, kEnv);
    CHECK(cap == doctest::Approx(0.5 * kEnv.kT() * 6e8).epsilon(1e-12));
    CHECK_NOTHROW(moved_from_energy(u, kEnv, 0.999999 * cap));
    CHECK_THROWS_AS(moved_from_energy(u, kEnv, 1.000001 * cap), std::domain_error);

    TransmitterConfig lopsided = u;
    lopsided.n_high = 6e9; // depletion of the small side binds before the series guard
    const double cap2 = max_valid_energy(lopsided, kEnv);
    CHECK(cap2 < 0.5 * kEnv.kT() * lopsided.n_low);
    CHECK_NOTHROW(moved_from_energy(lopsided, kEnv, 0.999999 * cap2));
    CHECK_THROWS_AS(moved_from_energy(lopsided, kEnv, 1.000001 * cap2), std::domain_error);
}
