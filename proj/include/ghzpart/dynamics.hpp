#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "ghzpart/allocate.hpp"
#include "ghzpart/qfi.hpp"

// Time-resolved QFI for frequency estimation: loss (with and without
// detection), dephasing and combined noise, their peak times and short-time
// slopes, QFI per unit evolution time, and the sequential-scheme planner.
//
// All values here are omega-QFI, i.e. t^2 times the phase QFI evaluated at
// p = e^(-eta t), q = (1 + e^(-gamma t))/2; QfiValue::per_omega marks them.

namespace ghzpart {

struct DynamicsScenario {
    NoiseParams params;  // F and k; p and q are derived from the rates
    RateParams rates;
    Allocation alloc;
    bool detection = true;  // nondemolition loss detection available

    double n() const { return static_cast<double>(alloc.n); }
    double m() const { return static_cast<double>(alloc.m); }
};

namespace detail {

// Static QFI at time-dependent (p, q). Detection post-selects the lossy
// shots away; without it the loss channel mixes into the probe.
inline double log_static_at_t(const DynamicsScenario& sc, double t, double nbar) {
    const double p = survival_prob(sc.rates.eta, t);
    const double q = dephasing_no_flip(sc.rates.gamma, t);
    if (sc.detection)
        return qfi_combined(sc.params.F, sc.params.k, p, q, nbar).log_value;
    double lv = log_qfi_loss1(sc.params.F, sc.params.k, p, nbar);
    if (q < 1.0) lv += 2.0 * nbar * std::log(2.0 * q - 1.0);
    return lv;
}

}  // namespace detail

// omega-QFI at evolution time t: m t^2 F_static(n/m; p(t), q(t)).
inline QfiValue qfi_t(const DynamicsScenario& sc, double t) {
    if (t < 0.0) throw std::domain_error("t: must be >= 0");
    NoiseParams snapshot = sc.params;
    snapshot.p = survival_prob(sc.rates.eta, t);
    snapshot.q = dephasing_no_flip(sc.rates.gamma, t);
    QfiValue q;
    if (t > 0.0) {
        const double nbar = sc.n() / sc.m();
        const double lv = std::log(sc.m()) + 2.0 * std::log(t) +
                          detail::log_static_at_t(sc, t, nbar);
        q = QfiValue::from_log(lv, sc.detection ? Scenario::Combined : Scenario::Loss1,
                               snapshot, sc.n(), sc.m());
    } else {
        q = QfiValue::from_log(kNegInf,
                               sc.detection ? Scenario::Combined : Scenario::Loss1,
                               snapshot, sc.n(), sc.m());
    }
    q.per_omega = true;
    return q;
}

// F(t)/t, the information accumulation rate of a cycle of length t.
inline double qfi_per_time(const DynamicsScenario& sc, double t) {
    if (t < 0.0) throw std::domain_error("t: must be >= 0");
    if (t == 0.0) return 0.0;
    return std::exp(qfi_t(sc, t).log_value - std::log(t));
}

namespace detail {

inline void require_decaying(const DynamicsScenario& sc) {
    if (sc.rates.eta == 0.0 && sc.rates.gamma == 0.0)
        throw UnboundedError("peak time: QFI grows as t^2 when both rates are 0");
}

}  // namespace detail

// Closed-form peak time. With loss detection the combined decay rate
// 2 gamma + eta gives t* = 2m / (n (2 gamma + eta)) exactly (this covers
// pure dephasing, gamma t* = m/n, and detected loss, eta t* = 2m/n).
// Without detection and with loss only, the first-order small-time solution
// of the stationarity equation is used; it is approximate.
inline double peak_time_closed(const DynamicsScenario& sc) {
    detail::require_decaying(sc);
    const double n = sc.n(), m = sc.m();
    if (sc.detection || sc.rates.eta == 0.0)
        return 2.0 * m / (n * (2.0 * sc.rates.gamma + sc.rates.eta));
    if (sc.rates.gamma > 0.0)
        throw std::domain_error(
            "peak_time_closed: undetected loss plus dephasing has no closed form");
    const double F = sc.params.F, k = sc.params.k;
    const double kx = std::exp(n / m * std::log(k));  // k^(n/m)
    const double disc = 4.0 * F * F * m * m * kx * kx +
                        4.0 * F * (2.0 * n - m) * n * k * kx + k * k * n * n;
    const double num = k * n - 2.0 * F * (2.0 * n + m) * kx + std::sqrt(disc);
    const double den = 4.0 * (k * n - kx * F * (n + m));
    return (2.0 * m / n) * (num / den) / sc.rates.eta;
}

// Golden-section maximizer of F(t) on (0, 10 t_ref].
inline double peak_time_numeric(const DynamicsScenario& sc) {
    detail::require_decaying(sc);
    double t_ref;
    try {
        t_ref = peak_time_closed(sc);
    } catch (const std::domain_error&) {
        t_ref = 2.0 * sc.m() / (sc.n() * (2.0 * sc.rates.gamma + sc.rates.eta));
    }
    const auto obj = [&](double t) {
        return t > 0.0 ? qfi_t(sc, t).log_value : kNegInf;
    };
    return golden_section_max(obj, 0.0, 10.0 * t_ref, 1e-10 * t_ref);
}

// Highest omega-QFI of the detected-loss-plus-dephasing dynamics: exact
// value at the peak and the large-(n/m) estimate
// 4 F k^(n/m) m / (e^2 k (2 gamma + eta)^2).
struct PeakQfi {
    double t_star = 0.0;
    QfiValue exact;
    double approx = 0.0;
};

inline PeakQfi peak_qfi_combined(const NoiseParams& pr, double n, double m, double gamma,
                                 double eta) {
    if (2.0 * gamma + eta <= 0.0)
        throw UnboundedError("peak_qfi_combined: both rates are 0");
    DynamicsScenario sc{pr, RateParams(eta, gamma),
                        Allocation::equal(static_cast<std::int64_t>(std::llround(n)),
                                          static_cast<std::int64_t>(std::llround(m))),
                        true};
    PeakQfi out;
    out.t_star = 2.0 * m / (n * (2.0 * gamma + eta));
    out.exact = qfi_t(sc, out.t_star);
    const double rate = 2.0 * gamma + eta;
    out.approx = std::exp(std::log(4.0 * pr.F * m) + (n / m) * std::log(pr.k) - 2.0 -
                          std::log(pr.k) - 2.0 * std::log(rate));
    return out;
}

// Linear coefficient of dF/dt at t -> 0: c(m) = (2 F / k) k^(n/m) n^2 / m.
// It grows with m for m < -n ln k, so partitioning speeds up early
// information gain. Rates only enter at the next order.
inline double short_time_slope(const NoiseParams& pr, double n, double m, double /*gamma*/,
                               double /*eta*/) {
    return std::exp(std::log(2.0 * pr.F / pr.k) + (n / m) * std::log(pr.k) +
                    2.0 * std::log(n) - std::log(m));
}

// Optimal partition count for QFI per unit time at a fixed cycle length:
// m~*(t) = n (2 gamma + eta) t - n ln k.
inline double optimal_partition_sequential(const NoiseParams& pr, double n, double gamma,
                                           double eta, double t) {
    if (t <= 0.0) throw std::domain_error("t: must be > 0");
    return n * (2.0 * gamma + eta) * t - n * std::log(pr.k);
}

// Total time budget T, optionally capped per-cycle evolution time.
struct SequentialBudget {
    double T = 1.0;
    double t_th = std::numeric_limits<double>::infinity();

    SequentialBudget() = default;
    SequentialBudget(double T_, double t_th_ = std::numeric_limits<double>::infinity())
        : T(T_), t_th(t_th_) {
        if (T <= 0.0) throw std::domain_error("T: must be > 0");
        if (t_th <= 0.0) throw std::domain_error("t_th: must be > 0");
    }
};

struct SequentialPlan {
    std::int64_t m = 1;       // chosen partition count
    double t = 0.0;           // chosen per-cycle evolution time
    double info = 0.0;        // accumulated information bound T F(t)/t
    double cycles = 0.0;      // implied cycle count T/t
    double m_star_closed = 1.0;
};

namespace detail {

inline double plan_cycle_time(double n, double m, double rate, double t_th) {
    return std::min(t_th, m / (n * rate));  // cap at the per-time optimum
}

inline double plan_value(const NoiseParams& pr, double n, double gamma, double eta,
                         std::int64_t m, double t_th) {
    const double rate = 2.0 * gamma + eta;
    DynamicsScenario sc{pr, RateParams(eta, gamma),
                        Allocation::equal(static_cast<std::int64_t>(std::llround(n)), m),
                        true};
    const double t = plan_cycle_time(n, static_cast<double>(m), rate, t_th);
    return qfi_per_time(sc, t);
}

}  // namespace detail

// Pick the partition count and cycle length maximizing T F(t)/t under the
// budget: the closed-form m~*(t_th) seeds a local integer scan.
inline SequentialPlan sequential_plan(const NoiseParams& pr, double n, double gamma,
                                      double eta, const SequentialBudget& budget) {
    const double rate = 2.0 * gamma + eta;
    if (rate <= 0.0) throw UnboundedError("sequential_plan: both rates are 0");
    SequentialPlan plan;
    const double m_cont = std::isfinite(budget.t_th)
                              ? optimal_partition_sequential(pr, n, gamma, eta, budget.t_th)
                              : n;
    plan.m_star_closed = std::min(std::max(m_cont, 1.0), n);
    const auto seed = static_cast<std::int64_t>(std::llround(plan.m_star_closed));
    double best = -1.0;
    for (std::int64_t m = std::max<std::int64_t>(1, seed - 3);
         m <= std::min(static_cast<std::int64_t>(n), seed + 3); ++m) {
        const double v = detail::plan_value(pr, n, gamma, eta, m, budget.t_th);
        if (v > best) {
            best = v;
            plan.m = m;
        }
    }
    plan.t = detail::plan_cycle_time(n, static_cast<double>(plan.m), rate, budget.t_th);
    plan.info = budget.T * best;
    plan.cycles = budget.T / plan.t;
    return plan;
}

// Same budget rule with the partition count imposed.
inline SequentialPlan sequential_plan_fixed_m(const NoiseParams& pr, double n, double gamma,
                                              double eta, const SequentialBudget& budget,
                                              std::int64_t m) {
    const double rate = 2.0 * gamma + eta;
    if (rate <= 0.0) throw UnboundedError("sequential_plan: both rates are 0");
    SequentialPlan plan;
    plan.m = m;
    plan.m_star_closed = static_cast<double>(m);
    plan.t = detail::plan_cycle_time(n, static_cast<double>(m), rate, budget.t_th);
    plan.info = budget.T * detail::plan_value(pr, n, gamma, eta, m, budget.t_th);
    plan.cycles = budget.T / plan.t;
    return plan;
}

}  // namespace ghzpart
