#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace ghzpart;

TEST_CASE("closed-form optima") {
    SUBCASE("optimal size at fixed partitioning") {
        CHECK(opt_n_closed(Scenario::StatePrep, NoiseParams(1.0, std::exp(-0.01)), 5.0) ==
              doctest::Approx(1000.0).epsilon(1e-12));
        CHECK(opt_n_closed(Scenario::Loss2, NoiseParams(1.0, 0.995, 0.995), 1.0) ==
              doctest::Approx(199.4996).epsilon(1e-6));
        CHECK(opt_n_closed(Scenario::Dephasing, NoiseParams(1.0, 0.99, 1.0, 0.9975), 1.0) ==
              doctest::Approx(2.0 / (0.0100503 + 0.0100251)).epsilon(1e-4));
        CHECK_THROWS_AS(opt_n_closed(Scenario::StatePrep, NoiseParams(1.0, 1.0), 3.0),
                        UnboundedError);
    }
    SUBCASE("optimal partitioning at fixed size") {
        CHECK(opt_m_closed(Scenario::StatePrep, NoiseParams(1.0, 0.999), 1500.0) ==
              doctest::Approx(1.50075).epsilon(1e-5));
        CHECK(opt_m_closed(Scenario::StatePrep, NoiseParams(1.0, 0.99), 350.0) ==
              doctest::Approx(3.51762).epsilon(1e-5));
        CHECK(opt_m_closed(Scenario::Loss2, NoiseParams(1.0, 0.99, 1.0), 350.0) ==
              opt_m_closed(Scenario::StatePrep, NoiseParams(1.0, 0.99), 350.0));
    }
    SUBCASE("closed form sits within +-2 of the integer argmax") {
        const OptimumReport l2 =
            integer_optimum_n(Scenario::Loss2, NoiseParams(1.0, 0.995, 0.995), 1.0, 2, 800);
        CHECK(std::abs(l2.closed_form - static_cast<double>(l2.integer_optimum)) <= 2.0);
        const OptimumReport dp = integer_optimum_n(
            Scenario::Dephasing, NoiseParams(1.0, 0.99, 1.0, 0.9975), 1.0, 2, 400);
        CHECK(std::abs(dp.closed_form - static_cast<double>(dp.integer_optimum)) <= 2.0);
    }
}

TEST_CASE("integer partition optimum") {
    SUBCASE("worked cases") {
        const OptimumReport a =
            integer_optimum(Scenario::StatePrep, NoiseParams(1.0, 0.999), 1500.0);
        CHECK(a.integer_optimum == 2);
        CHECK(a.qfi_at_integer.value == doctest::Approx(5.32e5).epsilon(5e-4));
        const OptimumReport b =
            integer_optimum(Scenario::StatePrep, NoiseParams(1.0, 0.99), 350.0);
        CHECK(b.integer_optimum == 4);
        CHECK(b.qfi_at_integer.value == doctest::Approx(12838.7).epsilon(5e-4));
    }
    SUBCASE("perfect system stays monolithic and reports unbounded") {
        const OptimumReport r =
            integer_optimum(Scenario::StatePrep, NoiseParams(1.0, 1.0), 100.0);
        CHECK(r.unbounded);
        CHECK(r.integer_optimum == 1);
        CHECK(r.qfi_at_integer.value == doctest::Approx(10000.0));
    }
    SUBCASE("local maximality certificate") {
        for (double k : {0.99, 0.995}) {
            for (double n : {350.0, 900.0}) {
                const OptimumReport r =
                    integer_optimum(Scenario::StatePrep, NoiseParams(1.0, k), n);
                if (r.integer_optimum > 1)
                    CHECK(r.qfi_at_integer.value > r.neighbor_below);
                CHECK(r.qfi_at_integer.value > r.neighbor_above);
            }
        }
    }
    SUBCASE("rounded closed form tracks the integer staircase") {
        for (double k : {0.99, 0.999}) {
            for (double n : {200.0, 1000.0, 2000.0}) {
                const OptimumReport r =
                    integer_optimum(Scenario::StatePrep, NoiseParams(1.0, k), n);
                CHECK(std::abs(std::round(-n * std::log(k)) -
                               static_cast<double>(r.integer_optimum)) <= 1.0);
            }
        }
    }
}

TEST_CASE("implicit stationarity equations for undetected loss") {
    const NoiseParams pr(1.0, 0.995, 0.995);
    SUBCASE("residual vanishes at the bisected root") {
        for (double m : {1.0, 3.0, 7.0}) {
            const double root = opt_implicit_loss1(OptVariable::N, pr, m);
            const detail::Loss1Stationarity f{1.0, 0.995, 0.995, 2.0};
            CHECK(std::abs(f(root, m)) / f.scale(root, m) < 1e-10);
        }
        for (double n : {300.0, 700.0}) {
            const double root = opt_implicit_loss1(OptVariable::M, pr, n);
            const detail::Loss1Stationarity f{1.0, 0.995, 0.995, 1.0};
            CHECK(std::abs(f(n, root)) / f.scale(n, root) < 1e-10);
        }
    }
    SUBCASE("frozen roots") {
        CHECK(opt_implicit_loss1(OptVariable::N, pr, 1.0) ==
              doctest::Approx(125.950708).epsilon(1e-6));
        CHECK(opt_implicit_loss1(OptVariable::M, pr, 600.0) ==
              doctest::Approx(8.642).epsilon(1e-3));
    }
    SUBCASE("degenerate p = 1 recovers the state-prep optimum") {
        const NoiseParams lossless(1.0, 0.995, 1.0);
        CHECK(opt_implicit_loss1(OptVariable::N, lossless, 4.0) ==
              doctest::Approx(opt_n_closed(Scenario::StatePrep, lossless, 4.0))
                  .epsilon(1e-9));
    }
    SUBCASE("undetected loss wants fewer sensors but more partitions") {
        for (double m : {1.0, 4.0, 10.0}) {
            CHECK(opt_implicit_loss1(OptVariable::N, pr, m) <
                  opt_n_closed(Scenario::Loss2, pr, m));
        }
        for (double n : {200.0, 600.0, 1000.0}) {
            CHECK(opt_implicit_loss1(OptVariable::M, pr, n) >
                  opt_m_closed(Scenario::Loss2, pr, n));
        }
    }
    CHECK_THROWS_AS(opt_implicit_loss1(OptVariable::N, NoiseParams(1.0, 1.0, 1.0), 2.0),
                    UnboundedError);
}

TEST_CASE("roots sit near the integer argmax of the uniform-shift form") {
    const NoiseParams pr(1.0, 0.995, 0.995);
    for (double m : {1.0, 5.0}) {
        const double root = opt_implicit_loss1(OptVariable::N, pr, m);
        std::int64_t best_n = 1;
        double best = kNegInf;
        for (std::int64_t n = static_cast<std::int64_t>(m); n <= 3000; ++n) {
            const double lv = std::log(m) + detail::log_qfi_loss1_model(
                                                1.0, 0.995, 0.995, n / m);
            if (lv > best) {
                best = lv;
                best_n = n;
            }
        }
        CHECK(std::abs(root - static_cast<double>(best_n)) <= 3.0);
    }
}

TEST_CASE("concavity interval") {
    SUBCASE("unit-rate case is exact") {
        const auto [lo, hi] = concavity_interval(std::exp(-1.0));
        CHECK(lo == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
        CHECK(hi == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("worked endpoints and curvature sign change") {
        const auto [lo, hi] = concavity_interval(0.99);
        CHECK(lo == doctest::Approx(58.285).epsilon(1e-4));
        CHECK(hi == doctest::Approx(339.711).epsilon(1e-4));
        const auto d2 = [](double n) {
            const auto f = [](double x) { return qfi_state_prep(1.0, 0.99, x).value; };
            const double h = n * 1e-4;
            return (f(n + h) - 2.0 * f(n) + f(n - h)) / (h * h);
        };
        CHECK(d2(lo * 0.8) > 0.0);
        CHECK(d2(lo * 1.2) < 0.0);
        CHECK(d2(hi * 0.9) < 0.0);
        CHECK(d2(hi * 1.1) > 0.0);
    }
    SUBCASE("monolithic optimum lies inside for any k") {
        for (double k : {0.91, 0.95, 0.99, 0.999}) {
            const auto [lo, hi] = concavity_interval(k);
            const double nstar = -2.0 / std::log(k);
            CHECK(lo < nstar);
            CHECK(nstar < hi);
        }
    }
    CHECK_THROWS_AS(concavity_interval(1.0), UnboundedError);
}

TEST_CASE("gradient field") {
    const NoiseParams pr(1.0, 0.99);
    SUBCASE("partitioning pays off beyond the optimal sub-ensemble size") {
        const auto [dm, dn] = gradient_field(pr, 100.0, 1.0);
        CHECK(dm > 0.0);
    }
    SUBCASE("gradient points along the optimal-partitioning ray") {
        for (double n : {200.0, 500.0, 1000.0}) {
            const double m = -n * std::log(0.99);
            const auto [dm, dn] = gradient_field(pr, n, m);
            CHECK(std::abs(dm) / std::hypot(dm, dn) < 1e-3);
            CHECK(dn > 0.0);
        }
    }
    SUBCASE("the size derivative flips sign across the optimal size") {
        const double m = 4.0;
        const double nstar = opt_n_closed(Scenario::StatePrep, pr, m);
        CHECK(gradient_field(pr, nstar * 0.9, m).second > 0.0);
        CHECK(gradient_field(pr, nstar * 1.1, m).second < 0.0);
    }
}

TEST_CASE("equal split dominates unequal splits inside the concave window") {
    std::mt19937 rng(211);
    const double k = 0.99;
    const auto [lo, hi] = concavity_interval(k);
    std::uniform_int_distribution<int> size_d(static_cast<int>(std::ceil(lo)),
                                              static_cast<int>(std::floor(hi)));
    std::uniform_int_distribution<int> m_d(2, 6);
    const NoiseParams pr(1.0, k);
    for (int rep = 0; rep < 100; ++rep) {
        const int m = m_d(rng);
        std::vector<std::int64_t> sizes;
        double n = 0.0;
        for (int i = 0; i < m; ++i) {
            sizes.push_back(size_d(rng));
            n += static_cast<double>(sizes.back());
        }
        const double unequal = unequal_partition_qfi(Scenario::StatePrep, pr, sizes).value;
        const double equal =
            qfi_partitioned_equal(Scenario::StatePrep, pr, n, static_cast<double>(m)).value;
        CHECK(equal >= unequal * (1.0 - 1e-12));
    }
}

TEST_CASE("advantage ratios") {
    SUBCASE("exponential advantage over the naive monolithic strategy") {
        const AdvantageReport r =
            advantage_ratios(Scenario::StatePrep, NoiseParams(1.0, 0.99), 1000.0);
        CHECK(r.ratio_vs_monolithic > 1.0);
        CHECK(r.ratio_vs_monolithic / r.ratio_vs_monolithic_approx > 0.5);
        CHECK(r.ratio_vs_monolithic / r.ratio_vs_monolithic_approx < 2.0);
        CHECK(r.ratio_vs_opt_size / r.ratio_vs_opt_size_approx > 0.5);
        CHECK(r.ratio_vs_opt_size / r.ratio_vs_opt_size_approx < 2.0);
    }
    SUBCASE("detected loss at p = 1 reduces to state prep") {
        const AdvantageReport a =
            advantage_ratios(Scenario::StatePrep, NoiseParams(1.0, 0.995), 800.0);
        const AdvantageReport b =
            advantage_ratios(Scenario::Loss2, NoiseParams(1.0, 0.995, 1.0), 800.0);
        CHECK(a.ratio_vs_monolithic == doctest::Approx(b.ratio_vs_monolithic));
        CHECK(a.m_star == b.m_star);
    }
    SUBCASE("optimal sub-ensemble holds about half the optimal monolithic size") {
        for (double k : {0.99, 0.995, 0.999}) {
            const AdvantageReport r =
                advantage_ratios(Scenario::StatePrep, NoiseParams(1.0, k), 1000.0);
            const double per_ensemble = 1000.0 / r.m_star;
            CHECK(std::abs(per_ensemble - r.n_star_monolithic / 2.0) /
                      (r.n_star_monolithic / 2.0) <
                  0.05);
        }
    }
    CHECK_THROWS_AS(advantage_ratios(Scenario::StatePrep, NoiseParams(1.0, 1.0), 100.0),
                    UnboundedError);
}
