#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "renalloc/rng.hpp"
#include "renalloc/utility.hpp"

using namespace renalloc;

TEST_CASE("eval_base anchor values") {
    const SigmoidUtility u(0.5, 1.0, 10.0);
    CHECK(eval_base(u, 10.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(eval_base(u, 10.0 + std::log(2.0)) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(eval_base(u, 10.0 - std::log(2.0)) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("eval_base continuity at rmid") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const double q = uniform_range(rng, 0.05, 1.0);
        const double p = uniform_range(rng, 0.05, 15.0);
        const double rmid = uniform_range(rng, 1.0, 50.0);
        const double lower = q * std::exp(p * (rmid - rmid));
        const double upper = 1.0 - (1.0 - q) * std::exp(-p * (rmid - rmid));
        CHECK(std::abs(lower - q) <= 1e-15);
        CHECK(std::abs(upper - q) <= 1e-15);
        CHECK(eval_base(SigmoidUtility(q, p, rmid), rmid) == doctest::Approx(q).epsilon(1e-15));
    }
}

TEST_CASE("eval_base is strictly increasing and bounded") {
    std::mt19937_64 rng(11);
    const SigmoidUtility u(0.3, 0.8, 10.0);
    for (int i = 0; i < 500; ++i) {
        double x1 = uniform_range(rng, 0.0, 40.0);
        double x2 = uniform_range(rng, 0.0, 40.0);
        if (x1 == x2) continue;
        if (x1 > x2) std::swap(x1, x2);
        CHECK(eval_base(u, x1) < eval_base(u, x2));
        CHECK(eval_base(u, x1) > 0.0);
        CHECK(eval_base(u, x2) < 1.0);
    }
}

TEST_CASE("eval_base asymptotes") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        const double q = uniform_range(rng, 0.05, 0.99);
        const double p = uniform_range(rng, 0.1, 14.0);
        const SigmoidUtility u(q, p, 10.0);
        CHECK(eval_base(u, 0.0) == doctest::Approx(q * std::exp(-p * 10.0)).epsilon(1e-12));
        CHECK(eval_base(u, 10.0 + 50.0 / p) > 1.0 - (1.0 - q) * std::exp(-50.0) - 1e-15);
    }
}

TEST_CASE("eval_user composes through effective energy") {
    CHECK(eval_user(UserProfile(0.5, 1.0, 10.0), 20.0) == doctest::Approx(0.5).epsilon(1e-15));
    // q = 1 saturates exactly at rmid_raw
    CHECK(eval_user(UserProfile(1.0, 1.0, 10.0), 10.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_user(UserProfile(0.8, 0.1, 10.0), 0.0) ==
          doctest::Approx(0.8 * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("profile derived quantities") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 200; ++i) {
        const double q = uniform_range(rng, 0.05, 1.0);
        const UserProfile user(q, 0.8, 10.0);
        CHECK(user.rmid_raw * q == doctest::Approx(10.0).epsilon(1e-15));
        CHECK(user.peak_marginal >= 0.0);
        CHECK(eval_user(user, user.rmid_raw) == doctest::Approx(q).epsilon(1e-12));
    }
    CHECK(UserProfile(1.0, 0.8, 10.0).peak_marginal == 0.0);
}

TEST_CASE("marginal_user anchor values") {
    CHECK(marginal_user(UserProfile(0.5, 1.0, 10.0), 20.0) == doctest::Approx(0.25).epsilon(1e-12));
    const UserProfile u8(0.8, 1.0, 10.0);  // rmid_raw = 12.5
    CHECK(marginal_user(u8, 12.5 - 1e-9) == doctest::Approx(0.64).epsilon(1e-6));
    CHECK(marginal_user(u8, 12.5 + 1e-9) == doctest::Approx(0.16).epsilon(1e-6));
    // right-hand convention at the kink
    CHECK(marginal_user(u8, 12.5) == doctest::Approx(0.16).epsilon(1e-12));
    CHECK(marginal_user(UserProfile(0.5, 1.0, 10.0), 1e6) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("marginal_user matches central finite differences") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 300; ++i) {
        const double q = uniform_range(rng, 0.05, 0.99);
        const double p = uniform_range(rng, 0.1, 3.0);
        const UserProfile user(q, p, 10.0);
        // sample away from the kink so the difference does not straddle it
        const double factors[] = {0.3, 0.7, 1.3, 2.0};
        for (double f : factors) {
            const double r = f * user.rmid_raw;
            const double h = 1e-6 * user.rmid_raw;
            const double fd =
                (eval_user(user, r + h) - eval_user(user, r - h)) / (2.0 * h);
            const double analytic = marginal_user(user, r);
            CHECK(std::abs(fd - analytic) <= 1e-6 * std::abs(analytic));
        }
    }
}

TEST_CASE("branch_eval anchors and q = 1 degenerate case") {
    const UserProfile half(0.5, 1.0, 10.0);
    CHECK(branch_eval(half, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(branch_eval(half, 2.0) == doctest::Approx(0.25 * std::exp(-1.0)).epsilon(1e-12));
    const UserProfile best(1.0, 1.0, 10.0);
    CHECK(branch_eval(best, 0.0) == 0.0);
    CHECK(branch_eval(best, 5.0) == 0.0);
    CHECK_THROWS_AS(branch_inverse(best, 0.1), std::domain_error);
}

TEST_CASE("branch_inverse anchors") {
    const UserProfile half(0.5, 1.0, 10.0);
    CHECK(branch_inverse(half, half.peak_marginal) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(branch_inverse(half, half.peak_marginal * std::exp(-1.0)) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("branch_eval and branch_inverse round trip") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 500; ++i) {
        const double q = uniform_range(rng, 0.05, 0.99);
        const double p = uniform_range(rng, 0.05, 14.0);
        const UserProfile user(q, p, 10.0);
        const double u = user.peak_marginal * uniform_range(rng, 1e-6, 1.0);
        const double s = branch_inverse(user, u);
        CHECK(s >= 0.0);
        CHECK(branch_eval(user, s) == doctest::Approx(u).epsilon(1e-12));
        // and the log form agrees
        CHECK(branch_inverse_log(user, std::log(u)) == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("equal-marginal users have a fixed effective-energy spread") {
    // If users i, j sit at the same decreasing-branch marginal u, then
    // q_i*r_i - q_j*r_j = (1/p)*log(m_i/m_j) independent of u.
    std::mt19937_64 rng(29);
    for (int i = 0; i < 300; ++i) {
        const double p = uniform_range(rng, 0.1, 14.0);
        const UserProfile a(uniform_range(rng, 0.05, 0.99), p, 10.0);
        const UserProfile b(uniform_range(rng, 0.05, 0.99), p, 10.0);
        const double u =
            std::min(a.peak_marginal, b.peak_marginal) * uniform_range(rng, 1e-3, 1.0);
        const double ra = a.rmid_raw + branch_inverse(a, u);
        const double rb = b.rmid_raw + branch_inverse(b, u);
        const double spread = a.q() * ra - b.q() * rb;
        const double expected = std::log(a.peak_marginal / b.peak_marginal) / p;
        CHECK(spread == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("log_marginal_user stays exact where the linear form underflows") {
    const UserProfile user(0.9, 14.0, 10.0);
    const double r = user.rmid_raw + 200.0;  // exp(-p*q*s) underflows
    CHECK(marginal_user(user, r) == 0.0);
    const double expected = std::log(user.peak_marginal) - 14.0 * 0.9 * 200.0;
    CHECK(log_marginal_user(user, r) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("parameter and domain validation") {
    CHECK_THROWS_AS(SigmoidUtility(0.0, 1.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(SigmoidUtility(1.5, 1.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(SigmoidUtility(0.5, 0.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(SigmoidUtility(0.5, 1.0, -1.0), std::invalid_argument);
    const UserProfile user(0.5, 1.0, 10.0);
    CHECK_THROWS_AS(eval_user(user, -1.0), std::domain_error);
    CHECK_THROWS_AS(marginal_user(user, -1.0), std::domain_error);
    CHECK_THROWS_AS(branch_eval(user, -1.0), std::domain_error);
    CHECK_THROWS_AS(branch_inverse(user, 0.0), std::domain_error);
    CHECK_THROWS_AS(branch_inverse(user, 0.26), std::domain_error);
}

TEST_CASE("eval_users matches the scalar path") {
    std::mt19937_64 rng(31);
    Eigen::ArrayXd q(6), r(6);
    for (int k = 0; k < 6; ++k) {
        q[k] = uniform_range(rng, 0.05, 1.0);
        r[k] = uniform_range(rng, 0.0, 300.0);
    }
    const Eigen::ArrayXd batch = eval_users(0.8, 10.0, q, r);
    for (int k = 0; k < 6; ++k)
        CHECK(batch[k] == doctest::Approx(eval_user(UserProfile(q[k], 0.8, 10.0), r[k]))
                              .epsilon(1e-15));
}
