#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "renalloc/radio_link.hpp"
#include "renalloc/rng.hpp"

using namespace renalloc;

namespace {

LinkParams test_params() {
    Eigen::ArrayXd gains(3);
    gains << 1.0, 0.5, 2.0;
    return LinkParams(20e6, 3, 4e-21, gains, 1.0);
}

}  // namespace

TEST_CASE("bandwidth split") {
    const LinkParams params = test_params();
    CHECK(params.w_sub * params.n_sub == doctest::Approx(params.w_total).epsilon(1e-15));
}

TEST_CASE("rate_from_power anchors") {
    const LinkParams params = test_params();
    for (int k = 0; k < 3; ++k) {
        const double reference = params.n0 * params.w_sub / params.channel_gains[k];
        CHECK(rate_from_power(params, k, 0.0) == 0.0);
        CHECK(rate_from_power(params, k, reference) ==
              doctest::Approx(params.w_sub).epsilon(1e-12));
        CHECK(rate_from_power(params, k, 3.0 * reference) ==
              doctest::Approx(2.0 * params.w_sub).epsilon(1e-12));
    }
}

TEST_CASE("power_from_rate anchors") {
    const LinkParams params = test_params();
    for (int k = 0; k < 3; ++k) {
        CHECK(power_from_rate(params, k, 0.0) == 0.0);
        CHECK(power_from_rate(params, k, params.w_sub) ==
              doctest::Approx(params.n0 * params.w_sub / params.channel_gains[k])
                  .epsilon(1e-12));
    }
}

TEST_CASE("rate/power round trip over the transmit range") {
    const LinkParams params = test_params();
    std::mt19937_64 rng(41);
    for (int i = 0; i < 1000; ++i) {
        const int k = static_cast<int>(next_index(rng, 3));
        const double power = uniform_range(rng, 0.0, kDefaultMaxTransmitPowerW);
        const double back = power_from_rate(params, k, rate_from_power(params, k, power));
        CHECK(std::abs(back - power) <= 1e-9 * std::max(power, 1e-30));
    }
}

TEST_CASE("energy is linear in tau") {
    Eigen::ArrayXd gains(2);
    gains << 1.0, 1.0;
    const LinkParams one(20e6, 2, 4e-21, gains, 1.0);
    const LinkParams two(20e6, 2, 4e-21, gains, 2.0);
    CHECK(energy_for_rate(one, 0, 0.0) == 0.0);
    const double rate = one.w_sub;
    CHECK(energy_for_rate(two, 0, rate) ==
          doctest::Approx(2.0 * energy_for_rate(one, 0, rate)).epsilon(1e-15));
    CHECK(energy_for_rate(one, 0, rate) ==
          doctest::Approx(one.n0 * one.w_sub / gains[0]).epsilon(1e-12));
}

TEST_CASE("energy is convex and increasing in rate") {
    const LinkParams params = test_params();
    double prev = energy_for_rate(params, 0, 0.0);
    double prev_delta = -1.0;
    for (int i = 1; i <= 50; ++i) {
        const double energy = energy_for_rate(params, 0, i * params.w_sub / 10.0);
        const double delta = energy - prev;
        CHECK(delta > 0.0);
        if (prev_delta >= 0.0) CHECK(delta > prev_delta);
        prev_delta = delta;
        prev = energy;
    }
}

TEST_CASE("total_energy sums the per-user terms") {
    const LinkParams params = test_params();
    std::mt19937_64 rng(43);
    Eigen::ArrayXd rates(3);

    rates.setZero();
    CHECK(total_energy(params, rates) == 0.0);

    rates << 0.0, 2e6, 0.0;
    CHECK(total_energy(params, rates) ==
          doctest::Approx(energy_for_rate(params, 1, 2e6)).epsilon(1e-15));

    for (int trial = 0; trial < 50; ++trial) {
        for (int k = 0; k < 3; ++k) rates[k] = uniform_range(rng, 0.0, 2.0 * params.w_sub);
        double naive = 0.0;
        for (int k = 0; k < 3; ++k) naive += energy_for_rate(params, k, rates[k]);
        CHECK(total_energy(params, rates) == doctest::Approx(naive).epsilon(1e-15));
    }
}

TEST_CASE("total_energy is permutation invariant with gains") {
    Eigen::ArrayXd gains(3), rates(3);
    gains << 1.0, 0.5, 2.0;
    rates << 1e6, 3e6, 2e6;
    const LinkParams params(20e6, 3, 4e-21, gains, 1.0);

    Eigen::ArrayXd gains_perm(3), rates_perm(3);
    gains_perm << 2.0, 1.0, 0.5;
    rates_perm << 2e6, 1e6, 3e6;
    const LinkParams params_perm(20e6, 3, 4e-21, gains_perm, 1.0);

    CHECK(total_energy(params, rates) ==
          doctest::Approx(total_energy(params_perm, rates_perm)).epsilon(1e-15));
}

TEST_CASE("q_from_gains normalizes and clamps") {
    Eigen::ArrayXd gains(4);
    gains << 4.0, 2.0, 0.1, 8.0;
    const Eigen::ArrayXd q = q_from_gains(gains, 0.05);
    CHECK(q[3] == 1.0);
    CHECK(q[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q[2] == doctest::Approx(0.05).epsilon(1e-15));  // clamped from 0.0125
}

TEST_CASE("validation") {
    Eigen::ArrayXd gains(2);
    gains << 1.0, 1.0;
    CHECK_THROWS_AS(LinkParams(0.0, 2, 4e-21, gains, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(LinkParams(20e6, 3, 4e-21, gains, 1.0), std::invalid_argument);
    const LinkParams params(20e6, 2, 4e-21, gains, 1.0);
    CHECK_THROWS_AS(rate_from_power(params, 0, -1.0), std::domain_error);
    CHECK_THROWS_AS(power_from_rate(params, 0, -1.0), std::domain_error);
    CHECK_THROWS_AS(rate_from_power(params, 5, 1.0), std::out_of_range);
    Eigen::ArrayXd bad_rates(3);
    bad_rates.setZero();
    CHECK_THROWS_AS(total_energy(params, bad_rates), std::invalid_argument);
}
