#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "ghzpart/noise.hpp"

using namespace ghzpart;

TEST_CASE("NoiseParams validates ranges and names the offending field") {
    CHECK_NOTHROW(NoiseParams(1.0, 1.0, 1.0, 1.0));
    CHECK_NOTHROW(NoiseParams(0.5, 0.99, 0.0, 0.5));  // p = 0 and q = 1/2 are boundaries
    CHECK_THROWS_WITH_AS(NoiseParams(0.0, 1.0), doctest::Contains("F"), std::domain_error);
    CHECK_THROWS_WITH_AS(NoiseParams(1.0, 1.2), doctest::Contains("k"), std::domain_error);
    CHECK_THROWS_WITH_AS(NoiseParams(1.0, 1.0, -0.1), doctest::Contains("p"),
                         std::domain_error);
    CHECK_THROWS_WITH_AS(NoiseParams(1.0, 1.0, 1.0, 0.4), doctest::Contains("q"),
                         std::domain_error);
    CHECK_THROWS_AS(RateParams(-1.0, 0.0), std::domain_error);
}

TEST_CASE("ghz_fidelity") {
    CHECK(ghz_fidelity(1.0, 1.0, 50.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ghz_fidelity(1.0, 0.99, 3.0) == doctest::Approx(0.9801).epsilon(1e-14));

    // independent oracle: plain product at extended precision
    long double prod = 0.999L;
    for (int i = 0; i < 99; ++i) prod *= 0.995L;
    CHECK(ghz_fidelity(0.999, 0.995, 100.0) ==
          doctest::Approx(static_cast<double>(prod)).epsilon(1e-13));

    CHECK_THROWS_AS(ghz_fidelity(1.0, 1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(ghz_fidelity(1.1, 1.0, 2.0), std::domain_error);
}

TEST_CASE("ghz_fidelity multiplicativity in log domain") {
    const double F = 0.98, k = 0.993;
    for (double n1 : {2.0, 7.0, 40.0, 333.0}) {
        for (double n2 : {3.0, 11.0, 1000.0}) {
            const double lhs = std::log(ghz_fidelity(F, k, n1 + n2 - 1.0));
            const double rhs = (n2 - 1.0) * std::log(k) + std::log(ghz_fidelity(F, k, n1));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
        }
    }
}

TEST_CASE("visibility") {
    CHECK(visibility(1.0, 1.0, 4.0) == 1.0);
    CHECK(visibility(1.0, 0.99, 3.0) ==
          doctest::Approx((8.0 * 0.9801 - 1.0) / 7.0).epsilon(1e-15));
    // when F(n) underflows to zero the exact rational -1/(2^n - 1) remains
    CHECK(visibility(1.0, 1e-300, 3.0) == doctest::Approx(-1.0 / 7.0).epsilon(1e-15));
    // stays finite at sizes where 2^n overflows
    CHECK(std::isfinite(visibility(1.0, 0.999, 1e6)));
}

TEST_CASE("no_flip_survival") {
    CHECK(no_flip_survival(1.0, 7) == 1.0);
    CHECK(no_flip_survival(0.5, 5) == 0.5);
    CHECK(no_flip_survival(0.9, 3) == doctest::Approx(0.756).epsilon(1e-15));
    CHECK_THROWS_AS(no_flip_survival(0.4, 3), std::domain_error);
}

TEST_CASE("even_binomial_sum matches its closed form") {
    CHECK(even_binomial_sum(0.9, 3) == doctest::Approx(0.756).epsilon(1e-15));
    CHECK(even_binomial_sum(1.0, 10) == 1.0);
    CHECK(even_binomial_sum(0.5, 4) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(even_binomial_sum(0.5, 61), std::overflow_error);

    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> qd(0.5, 1.0);
    for (int n = 1; n <= 60; ++n) {
        for (int i = 0; i < 100; ++i) {
            const double q = qd(rng);
            CHECK(std::abs(even_binomial_sum(q, n) - no_flip_survival(q, n)) < 1e-13);
        }
    }
}

// The same identity via the Gauss hypergeometric series, including the
// non-integer-order conjecture (series converges since ((1-q)/q)^2 < 1).
namespace {
double hyp2f1_series(double a, double b, double c, double z) {
    double term = 1.0, acc = 1.0;
    for (int i = 0; i < 600; ++i) {
        term *= (a + i) * (b + i) / (c + i) * z / (i + 1.0);
        acc += term;
        if (std::abs(term) < 1e-18 * std::abs(acc)) break;
    }
    return acc;
}
}  // namespace

TEST_CASE("hypergeometric representation of the even-binomial sum") {
    for (double n : {3.0, 8.0, 17.0}) {
        for (double q : {0.6, 0.8, 0.97}) {
            const double z = (1.0 - q) / q;
            const double lhs = hyp2f1_series(0.5 - n / 2.0, -n / 2.0, 0.5, z * z);
            const double rhs = (1.0 + std::pow(2.0 * q - 1.0, n)) / (2.0 * std::pow(q, n));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
        }
    }
    // numeric spot-checks for non-integer order
    for (double n : {2.7, 7.3, 15.55}) {
        for (double q : {0.65, 0.9}) {
            const double z = (1.0 - q) / q;
            const double lhs = hyp2f1_series(0.5 - n / 2.0, -n / 2.0, 0.5, z * z);
            const double rhs = (1.0 + std::pow(2.0 * q - 1.0, n)) / (2.0 * std::pow(q, n));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
}

TEST_CASE("loss_eigenvalue_shift") {
    CHECK(loss_eigenvalue_shift(1.0, 12) == 0.0);
    CHECK(loss_eigenvalue_shift(0.9, 2) == doctest::Approx(0.04625).epsilon(1e-14));
    CHECK(loss_eigenvalue_shift(0.0, 3) == doctest::Approx(1.0 / 16.0).epsilon(1e-15));

    // independent oracle: the binomial sum over lost-qubit counts
    for (int n : {1, 2, 5, 11}) {
        for (double p : {0.05, 0.5, 0.93}) {
            double acc = 0.0;
            for (int m = 1; m <= n; ++m)
                acc += static_cast<double>(binomial_u64(n, m)) * std::pow(p, n - m) *
                       std::pow(1.0 - p, m) * std::exp2(-(m + 1));
            CHECK(loss_eigenvalue_shift(p, n) == doctest::Approx(acc).epsilon(1e-13));
        }
    }
}

// The shift is not monotone over all of (0, 1): for n = 2 it is
// (1 + 2p - 3p^2)/8, rising until p = 1/3. It does decrease strictly once
// (1+p)^(n-1) < 2 (2p)^(n-1), which always holds on [1 - 1/(2n), 1).
TEST_CASE("loss_eigenvalue_shift decreases strictly toward p = 1") {
    for (int n : {1, 2, 3, 8, 20}) {
        const double lo = 1.0 - 0.5 / n;
        double prev = loss_eigenvalue_shift(lo, n);
        for (int i = 1; i <= 40; ++i) {
            const double p = lo + (1.0 - lo) * i / 41.0;
            const double cur = loss_eigenvalue_shift(p, n);
            CHECK(cur < prev);
            prev = cur;
        }
        CHECK(loss_eigenvalue_shift(1.0, n) == 0.0);
    }
}

TEST_CASE("time-dependent probabilities") {
    CHECK(survival_prob(0.0, 123.0) == 1.0);
    CHECK(survival_prob(0.01, 100.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(dephasing_no_flip(1.0, kLn2) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(survival_prob(-0.1, 1.0), std::domain_error);
    CHECK_THROWS_AS(dephasing_no_flip(0.1, -1.0), std::domain_error);
}

TEST_CASE("exact loss shift exceeds the tabulated one by the all-lost term") {
    for (int n : {1, 2, 4, 9}) {
        for (double p : {0.1, 0.6, 0.99}) {
            const double exact = std::exp(detail::log_loss_shift_exact(p, n));
            const double tabulated = loss_eigenvalue_shift(p, n);
            const double extra = std::pow(1.0 - p, n) * std::exp2(-(n + 1));
            CHECK(exact == doctest::Approx(tabulated + extra).epsilon(1e-13));
        }
    }
}
