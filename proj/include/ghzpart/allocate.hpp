#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "ghzpart/qfi.hpp"

// Resource-allocation optimization: closed-form optima, the implicit
// equations for undetected loss, exact integer search, unequal partitions,
// the concavity interval, the gradient field and the advantage ratios.
//
// Closed forms are approximations and are always reported next to an exact
// integer search; they are never silently substituted for the argmax.

namespace ghzpart {

// Effective log-denominator of the closed-form optima: ln k for state
// preparation alone, ln k + ln p with detected loss, ln k + 2 ln(2q - 1)
// under dephasing, and the sum of all three when combined.
inline double scenario_log_decay(Scenario sc, const NoiseParams& pr) {
    switch (sc) {
        case Scenario::StatePrep: return std::log(pr.k);
        case Scenario::Loss2: return std::log(pr.k) + std::log(pr.p);
        case Scenario::Dephasing: return std::log(pr.k) + 2.0 * std::log(2.0 * pr.q - 1.0);
        case Scenario::Combined:
            return std::log(pr.k) + std::log(pr.p) + 2.0 * std::log(2.0 * pr.q - 1.0);
        case Scenario::Loss1:
            throw std::domain_error("scenario_log_decay: loss1 has no closed form, "
                                    "use opt_implicit_loss1");
    }
    throw std::logic_error("scenario_log_decay: bad scenario");
}

// n* ~ -2m / L: optimal total sensor count at fixed partition number.
inline double opt_n_closed(Scenario sc, const NoiseParams& pr, double m) {
    const double L = scenario_log_decay(sc, pr);
    if (L == 0.0) throw UnboundedError("opt_n_closed: all error parameters are 1");
    return -2.0 * m / L;
}

// m* ~ -n L: optimal partition number at fixed total sensor count.
inline double opt_m_closed(Scenario sc, const NoiseParams& pr, double n) {
    const double L = scenario_log_decay(sc, pr);
    if (L == 0.0) throw UnboundedError("opt_m_closed: all error parameters are 1");
    return -n * L;
}

namespace detail {

// Stationarity function for undetected loss, shared by the n* (c = 2) and
// m* (c = 1) equations:
//   0 = F (2kp)^x [c m + n ln(kp)] - k (2p)^x [c m + n ln(k^2 p)]
//       + k (1+p)^x [c m + n ln(2 k^2 p^2 / (1+p))],  x = n/m.
// Terms are rescaled by the largest exponential before summing.
struct Loss1Stationarity {
    double F, k, p;
    double c;

    double operator()(double n, double m) const {
        const double x = n / m;
        const double e1 = std::log(F) + x * std::log(2.0 * k * p);
        const double e2 = std::log(k) + x * std::log(2.0 * p);
        const double e3 = std::log(k) + x * std::log1p(p);
        const double a1 = c * m + n * std::log(k * p);
        const double a2 = c * m + n * std::log(k * k * p);
        const double a3 = c * m + n * std::log(2.0 * k * k * p * p / (1.0 + p));
        const double top = std::max(e1, std::max(e2, e3));
        return std::exp(e1 - top) * a1 - std::exp(e2 - top) * a2 + std::exp(e3 - top) * a3;
    }

    // largest rescaled term magnitude, the natural residual scale
    double scale(double n, double m) const {
        const double x = n / m;
        const double e1 = std::log(F) + x * std::log(2.0 * k * p);
        const double e2 = std::log(k) + x * std::log(2.0 * p);
        const double e3 = std::log(k) + x * std::log1p(p);
        const double a1 = c * m + n * std::log(k * p);
        const double a2 = c * m + n * std::log(k * k * p);
        const double a3 = c * m + n * std::log(2.0 * k * k * p * p / (1.0 + p));
        const double top = std::max(e1, std::max(e2, e3));
        double s = std::abs(std::exp(e1 - top) * a1);
        s = std::max(s, std::abs(std::exp(e2 - top) * a2));
        s = std::max(s, std::abs(std::exp(e3 - top) * a3));
        return s;
    }
};

}  // namespace detail

enum class OptVariable { N, M };

// Root of the undetected-loss stationarity equation, bisected on
// [guess/10, 10 guess] where guess is the detected-loss closed form.
inline double opt_implicit_loss1(OptVariable which, const NoiseParams& pr, double fixed) {
    if (pr.k == 1.0 && pr.p == 1.0)
        throw UnboundedError("opt_implicit_loss1: all error parameters are 1");
    const double L = std::log(pr.k) + std::log(pr.p);
    const detail::Loss1Stationarity f{pr.F, pr.k, pr.p, which == OptVariable::N ? 2.0 : 1.0};
    double guess;
    std::function<double(double)> g;
    if (which == OptVariable::N) {
        const double m = fixed;
        guess = -2.0 * m / L;
        g = [&f, m](double n) { return f(n, m); };
    } else {
        const double n = fixed;
        guess = -n * L;
        g = [&f, n](double m) { return f(n, m); };
    }
    return bisect_root(g, guess / 10.0, guess * 10.0, 0.0);
}

// Result of an exhaustive integer scan next to its closed-form estimate.
struct OptimumReport {
    double closed_form = 0.0;
    std::int64_t integer_optimum = 1;
    QfiValue qfi_at_integer;
    double neighbor_below = 0.0;  // QFI at integer_optimum - 1, 0 at the boundary
    double neighbor_above = 0.0;  // QFI at integer_optimum + 1
    bool unbounded = false;       // closed form does not exist (perfect system)
};

// argmax over integer m of m F(n/m), ties broken toward smaller m.
inline OptimumReport integer_optimum(Scenario sc, const NoiseParams& pr, double n,
                                     std::int64_t m_cap = 100000) {
    OptimumReport rep;
    try {
        rep.closed_form = sc == Scenario::Loss1
                              ? opt_implicit_loss1(OptVariable::M, pr, n)
                              : opt_m_closed(sc, pr, n);
    } catch (const UnboundedError&) {
        rep.unbounded = true;
    }
    const auto m_hi = static_cast<std::int64_t>(std::min<double>(
        static_cast<double>(m_cap), std::floor(n)));
    std::int64_t best_m = 1;
    double best = kNegInf;
    std::vector<double> cache;
    cache.reserve(static_cast<std::size_t>(m_hi));
    for (std::int64_t m = 1; m <= m_hi; ++m) {
        const double lv =
            qfi_partitioned_equal(sc, pr, n, static_cast<double>(m)).log_value;
        cache.push_back(lv);
        if (lv > best) {
            best = lv;
            best_m = m;
        }
    }
    rep.integer_optimum = best_m;
    rep.qfi_at_integer = qfi_partitioned_equal(sc, pr, n, static_cast<double>(best_m));
    rep.neighbor_below =
        best_m > 1 ? std::exp(cache[static_cast<std::size_t>(best_m - 2)]) : 0.0;
    rep.neighbor_above =
        best_m < m_hi ? std::exp(cache[static_cast<std::size_t>(best_m)]) : 0.0;
    return rep;
}

// argmax over integer n in [n_lo, n_hi] of the monolithic QFI at fixed m.
inline OptimumReport integer_optimum_n(Scenario sc, const NoiseParams& pr, double m,
                                       std::int64_t n_lo, std::int64_t n_hi) {
    OptimumReport rep;
    try {
        rep.closed_form = sc == Scenario::Loss1 ? opt_implicit_loss1(OptVariable::N, pr, m)
                                                : opt_n_closed(sc, pr, m);
    } catch (const UnboundedError&) {
        rep.unbounded = true;
    }
    if (n_lo < static_cast<std::int64_t>(m)) n_lo = static_cast<std::int64_t>(m);
    std::int64_t best_n = n_lo;
    double best = kNegInf;
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        const double lv = qfi_partitioned_equal(sc, pr, static_cast<double>(n), m).log_value;
        if (lv > best) {
            best = lv;
            best_n = n;
        }
    }
    rep.integer_optimum = best_n;
    rep.qfi_at_integer = qfi_partitioned_equal(sc, pr, static_cast<double>(best_n), m);
    rep.neighbor_below =
        best_n > n_lo
            ? std::exp(qfi_partitioned_equal(sc, pr, static_cast<double>(best_n - 1), m)
                           .log_value)
            : 0.0;
    rep.neighbor_above =
        best_n < n_hi
            ? std::exp(qfi_partitioned_equal(sc, pr, static_cast<double>(best_n + 1), m)
                           .log_value)
            : 0.0;
    return rep;
}

// Total QFI of explicitly sized sub-ensembles.
inline QfiValue unequal_partition_qfi(Scenario sc, const NoiseParams& pr,
                                      const std::vector<std::int64_t>& sizes) {
    return qfi_partitioned(sc, pr, Allocation::from_sizes(sizes));
}

// Interval on which the monolithic state-prep QFI is concave in n:
// [-(2 - sqrt 2)/ln k, -(2 + sqrt 2)/ln k].
inline std::pair<double, double> concavity_interval(double k) {
    if (k <= 0.0 || k >= 1.0)
        throw UnboundedError("concavity_interval: need k in (0, 1)");
    const double lk = std::log(k);
    const double r2 = std::sqrt(2.0);
    return {-(2.0 - r2) / lk, -(2.0 + r2) / lk};
}

// (dF/dm, dF/dn) of the equal-split QFI, from central differences of the
// log-domain value with relative step 1e-5.
inline std::pair<double, double> gradient_field(const NoiseParams& pr, double n, double m,
                                                Scenario sc = Scenario::StatePrep) {
    const auto logf = [&](double nn, double mm) {
        return qfi_partitioned_equal(sc, pr, nn, mm).log_value;
    };
    const double f0 = std::exp(logf(n, m));
    const double hm = m * 1e-5, hn = n * 1e-5;
    // one-sided at the m >= 1 and n >= m boundaries
    const double dlog_dm = m - hm >= 1.0 && n >= m + hm
                               ? (logf(n, m + hm) - logf(n, m - hm)) / (2.0 * hm)
                               : (logf(n, m + hm) - logf(n, m)) / hm;
    const double dlog_dn = n - hn >= m ? (logf(n + hn, m) - logf(n - hn, m)) / (2.0 * hn)
                                       : (logf(n + hn, m) - logf(n, m)) / hn;
    return {f0 * dlog_dm, f0 * dlog_dn};
}

// Partitioning-advantage ratios at a fixed budget of n sensors: the gain of
// optimal partitioning over the monolithic strategy (exponential in n) and
// over the monolithic strategy at its own optimal size (linear in n),
// with the closed-form estimates alongside the exact values.
struct AdvantageReport {
    double m_star = 1.0;                 // closed-form optimal partition count
    double n_star_monolithic = 0.0;      // closed-form optimal monolithic size
    double ratio_vs_monolithic = 1.0;    // F(n, m*) / F(n), exact
    double ratio_vs_monolithic_approx = 1.0;
    double ratio_vs_opt_size = 1.0;      // F(n, m*) / F(n*), exact
    double ratio_vs_opt_size_approx = 1.0;
    double k_sensitivity = 0.0;          // d/dk F(F,k,n,-n ln k), state prep only
};

inline AdvantageReport advantage_ratios(Scenario sc, const NoiseParams& pr, double n) {
    const double L = scenario_log_decay(sc, pr);
    if (L == 0.0) throw UnboundedError("advantage_ratios: all error parameters are 1");
    AdvantageReport rep;
    rep.m_star = std::min(std::max(-n * L, 1.0), n);
    rep.n_star_monolithic = -2.0 / L;
    const double log_part = qfi_partitioned_equal(sc, pr, n, rep.m_star).log_value;
    rep.ratio_vs_monolithic = std::exp(log_part - static_qfi(sc, pr, n).log_value);
    rep.ratio_vs_monolithic_approx = -std::exp(-n * L - 1.0) / (n * L);
    if (n >= rep.n_star_monolithic) {
        rep.ratio_vs_opt_size =
            std::exp(log_part - static_qfi(sc, pr, rep.n_star_monolithic).log_value);
        rep.ratio_vs_opt_size_approx = -std::exp(1.0) * L * n / 4.0;
    }
    if (sc == Scenario::StatePrep) {
        const double k = pr.k, lk = std::log(k);
        rep.k_sensitivity =
            std::exp(-1.0) * (1.0 + lk) / (k * k * lk * lk) * pr.F * n;
    }
    return rep;
}

}  // namespace ghzpart
