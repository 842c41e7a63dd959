#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzpart/noise.hpp"
#include "ghzpart/numeric.hpp"

// Closed-form quantum Fisher information for phase estimation with
// depolarized GHZ probes under static noise: state-preparation error only,
// particle loss with and without nondemolition detection, dephasing, and
// the combined case, in monolithic and partitioned form.
//
// All formulas are evaluated in log domain above a size threshold so that
// sensor counts up to 1e6 neither overflow nor underflow; below the
// threshold a direct path is used (it gives exactly n^2 for a perfect GHZ
// state). The two paths are cross-checked in the tests at the boundary.

namespace ghzpart {

enum class Scenario { StatePrep, Loss1, Loss2, Dephasing, Combined };

inline const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::StatePrep: return "state-prep";
        case Scenario::Loss1: return "loss1";
        case Scenario::Loss2: return "loss2";
        case Scenario::Dephasing: return "dephasing";
        case Scenario::Combined: return "combined";
    }
    return "?";
}

// Sensor budget n split into m sub-ensembles of the given sizes.
struct Allocation {
    std::int64_t n = 1;
    std::int64_t m = 1;
    std::vector<std::int64_t> sizes{1};

    // n mod m sub-ensembles of ceil(n/m), the rest floor(n/m).
    static Allocation equal(std::int64_t n, std::int64_t m) {
        if (n < 1 || m < 1 || m > n)
            throw std::domain_error("Allocation: need 1 <= m <= n");
        Allocation a;
        a.n = n;
        a.m = m;
        const std::int64_t lo = n / m, rem = n % m;
        a.sizes.assign(static_cast<std::size_t>(m), lo);
        for (std::int64_t i = 0; i < rem; ++i) a.sizes[static_cast<std::size_t>(i)] = lo + 1;
        return a;
    }

    static Allocation from_sizes(std::vector<std::int64_t> sizes) {
        if (sizes.empty()) throw std::domain_error("Allocation: sizes empty");
        Allocation a;
        a.n = 0;
        for (auto s : sizes) {
            if (s < 1) throw std::domain_error("Allocation: sizes must be >= 1");
            a.n += s;
        }
        a.m = static_cast<std::int64_t>(sizes.size());
        a.sizes = std::move(sizes);
        return a;
    }
};

// A nonnegative QFI carried with its natural log (-inf encodes zero) and
// the evaluation context. per_omega marks frequency-estimation QFI, t^2
// times the phase QFI; the two must never be mixed.
struct QfiValue {
    double value = 0.0;
    double log_value = kNegInf;
    Scenario scenario = Scenario::StatePrep;
    NoiseParams params{};
    double n = 0.0;
    double m = 1.0;
    bool per_omega = false;

    static QfiValue from_log(double lv, Scenario sc, const NoiseParams& pr, double n_,
                             double m_ = 1.0) {
        QfiValue q;
        q.log_value = lv;
        q.value = std::exp(lv);
        q.scenario = sc;
        q.params = pr;
        q.n = n_;
        q.m = m_;
        return q;
    }

    static QfiValue from_value(double v, Scenario sc, const NoiseParams& pr, double n_,
                               double m_ = 1.0) {
        QfiValue q;
        q.value = v;
        q.log_value = v > 0.0 ? std::log(v) : kNegInf;
        q.scenario = sc;
        q.params = pr;
        q.n = n_;
        q.m = m_;
        return q;
    }
};

namespace detail {

// Size above which the closed forms switch from direct to log-domain
// arithmetic.
inline constexpr double kDirectPathMaxN = 50.0;

// ln|V(n)| with sign:  V = (F (2k)^n - k) / (k (2^n - 1)).
inline SignedLog log_visibility(double F, double k, double n) {
    const SignedLog num = signed_log_diff(std::log(F) + n * std::log(2.0 * k), std::log(k));
    const double den = std::log(k) + n * kLn2 + log1mexp(-n * kLn2);
    return {num.ln_abs - den, num.sign};
}

// ln(lambda_+ + lambda_-) of the top GHZ class:
// S = (k + F (2^n - 2) k^n) / (k (2^n - 1)).
inline double log_class_sum(double F, double k, double n) {
    const double lk = std::log(k);
    double log_2n_minus_2;  // ln(2^n - 2), -inf at n = 1
    if (n <= 1.0)
        log_2n_minus_2 = kNegInf;
    else
        log_2n_minus_2 = n * kLn2 + log1mexp((1.0 - n) * kLn2);
    const double num = log_sum_exp(lk, std::log(F) + log_2n_minus_2 + n * lk);
    const double den = lk + n * kLn2 + log1mexp(-n * kLn2);
    return num - den;
}

// ln F(F,k,n) for the state-preparation-only scenario (log path).
inline double log_qfi_state_prep(double F, double k, double n) {
    const SignedLog v = log_visibility(F, k, n);
    if (v.sign == 0) return kNegInf;
    return 2.0 * std::log(n) + 2.0 * v.ln_abs - log_class_sum(F, k, n);
}

// Direct path; exact n^2 at F = k = 1 because the shared factors cancel
// as quotients before multiplying.
inline double qfi_state_prep_direct(double F, double k, double n) {
    const double num = F * std::pow(2.0 * k, n) - k;
    const double den1 = k * (std::exp2(n) - 1.0);
    const double den2 = k + F * (std::exp2(n) - 2.0) * std::pow(k, n);
    return n * n * (num / den1) * (num / den2);
}

// ln(lambda_+) = ln F(n) and ln(lambda_-) = ln[(1 - F(n)) / (2^n - 1)] of
// the top GHZ class of the depolarized input.
inline double log_lambda_plus(double F, double k, double n) {
    return std::log(F) + (n - 1.0) * std::log(k);
}

inline double log_lambda_minus(double F, double k, double n) {
    const double lp = log_lambda_plus(F, k, n);
    if (lp >= 0.0) return kNegInf;  // F(n) == 1
    return log1mexp(lp) - (n * kLn2 + log1mexp(-n * kLn2));
}

// ln of the post-loss class sum  lam+ (p^n + 2 dls) + lam- (2 - p^n - 2 dls)
// with dls the exact per-class loss shift. Both weights are nonnegative, so
// no cancellation occurs for any parameter values.
inline double log_loss1_denominator(double F, double k, double p, double n) {
    const double log_pn = n * std::log(p);
    const double log_w_plus = p < 1.0
                                  ? log_sum_exp(log_pn, kLn2 + log_loss_shift_exact(p, n))
                                  : 0.0;
    const double log_w_minus = log_diff_exp(kLn2, log_w_plus);
    return log_sum_exp(log_lambda_plus(F, k, n) + log_w_plus,
                       log_lambda_minus(F, k, n) + log_w_minus);
}

// Exact loss-without-detection QFI of the physical loss channel:
//   F1 = n^2 p^(2n) V^2 / [lam+ (p^n + 2 dls) + lam- (2 - p^n - 2 dls)].
inline double log_qfi_loss1(double F, double k, double p, double n) {
    if (p <= 0.0) return kNegInf;
    const SignedLog v = log_visibility(F, k, n);
    if (v.sign == 0) return kNegInf;
    const double lnum = 2.0 * std::log(n) + 2.0 * n * std::log(p) + 2.0 * v.ln_abs;
    return lnum - log_loss1_denominator(F, k, p, n);
}

// Uniform-shift model of the same quantity:
//   F1 = n^2 p^(2n) V^2 / [p^n (lam+ + lam-) + ((1+p)/2)^n - p^n].
// Here the loss deposit enters the class sum at full weight instead of
// being carried by the GHZ component, and the all-lost pattern keeps the
// 2^-(n+1) weight. This is the form behind the detection-advantage
// approximations and the stationarity-equation optimizers; it coincides with
// the exact expression as F(n) -> 1 and p -> 1 but undercounts the QFI by
// roughly a factor of the visibility deep in the noisy regime.
inline double log_qfi_loss1_model(double F, double k, double p, double n) {
    if (p <= 0.0) return kNegInf;
    const SignedLog v = log_visibility(F, k, n);
    if (v.sign == 0) return kNegInf;
    const double lnum = 2.0 * std::log(n) + 2.0 * n * std::log(p) + 2.0 * v.ln_abs;
    if (p == 1.0) return lnum - log_class_sum(F, k, n);
    const double shift = log_diff_exp(n * std::log(0.5 * (1.0 + p)), n * std::log(p));
    const double den = log_sum_exp(n * std::log(p) + log_class_sum(F, k, n), shift);
    return lnum - den;
}

}  // namespace detail

// State-preparation error only. n is treated as a positive real: the
// optimizers differentiate in n.
inline QfiValue qfi_state_prep(double F, double k, double n) {
    detail::require(F > 0.0 && F <= 1.0, "F", "must lie in (0, 1]");
    detail::require(k > 0.0 && k <= 1.0, "k", "must lie in (0, 1]");
    detail::require(n >= 1.0, "n", "must be >= 1");
    const NoiseParams pr(F, k);
    if (n <= detail::kDirectPathMaxN)
        return QfiValue::from_value(detail::qfi_state_prep_direct(F, k, n),
                                    Scenario::StatePrep, pr, n);
    return QfiValue::from_log(detail::log_qfi_state_prep(F, k, n), Scenario::StatePrep, pr, n);
}

// Particle loss without detection capability.
inline QfiValue qfi_loss_no_detection(double F, double k, double p, double n) {
    detail::require(p > 0.0 && p <= 1.0, "p", "must lie in (0, 1]");
    const QfiValue base = qfi_state_prep(F, k, n);  // validates F, k, n
    NoiseParams pr(F, k, p);
    if (p == 1.0) {
        QfiValue q = base;
        q.scenario = Scenario::Loss1;
        q.params = pr;
        return q;
    }
    return QfiValue::from_log(detail::log_qfi_loss1(F, k, p, n), Scenario::Loss1, pr, n);
}

// Uniform-shift model of the undetected-loss QFI (see
// detail::log_qfi_loss1_model). The exhaustive optimizer comparisons for
// the undetected-loss stationarity equations and the printed
// detection-advantage approximations are calibrated against this form.
inline QfiValue qfi_loss_no_detection_model(double F, double k, double p, double n) {
    detail::require(p > 0.0 && p <= 1.0, "p", "must lie in (0, 1]");
    const QfiValue base = qfi_state_prep(F, k, n);
    NoiseParams pr(F, k, p);
    if (p == 1.0) {
        QfiValue q = base;
        q.scenario = Scenario::Loss1;
        q.params = pr;
        return q;
    }
    return QfiValue::from_log(detail::log_qfi_loss1_model(F, k, p, n), Scenario::Loss1, pr,
                              n);
}

// Particle loss with nondemolition detection: post-selection scales the
// state-preparation QFI by the no-loss probability p^n.
inline QfiValue qfi_loss_with_detection(double F, double k, double p, double n) {
    detail::require(p > 0.0 && p <= 1.0, "p", "must lie in (0, 1]");
    const QfiValue base = qfi_state_prep(F, k, n);
    NoiseParams pr(F, k, p);
    if (p == 1.0) {
        QfiValue q = base;
        q.scenario = Scenario::Loss2;
        q.params = pr;
        return q;
    }
    return QfiValue::from_log(base.log_value + n * std::log(p), Scenario::Loss2, pr, n);
}

// Independent per-qubit dephasing: scales by (2q - 1)^(2n); zero at q = 1/2.
inline QfiValue qfi_dephasing(double F, double k, double q, double n) {
    detail::require(q >= 0.5 && q <= 1.0, "q", "must lie in [1/2, 1]");
    const QfiValue base = qfi_state_prep(F, k, n);
    NoiseParams pr(F, k, 1.0, q);
    if (q == 1.0) {
        QfiValue v = base;
        v.scenario = Scenario::Dephasing;
        v.params = pr;
        return v;
    }
    if (q == 0.5) return QfiValue::from_log(kNegInf, Scenario::Dephasing, pr, n);
    return QfiValue::from_log(base.log_value + 2.0 * n * std::log(2.0 * q - 1.0),
                              Scenario::Dephasing, pr, n);
}

// Detected loss and dephasing together (the channels commute).
inline QfiValue qfi_combined(double F, double k, double p, double q, double n) {
    detail::require(p > 0.0 && p <= 1.0, "p", "must lie in (0, 1]");
    detail::require(q >= 0.5 && q <= 1.0, "q", "must lie in [1/2, 1]");
    const QfiValue base = qfi_state_prep(F, k, n);
    NoiseParams pr(F, k, p, q);
    if (q == 0.5) return QfiValue::from_log(kNegInf, Scenario::Combined, pr, n);
    const double lv = base.log_value + n * std::log(p) +
                      (q < 1.0 ? 2.0 * n * std::log(2.0 * q - 1.0) : 0.0);
    return QfiValue::from_log(lv, Scenario::Combined, pr, n);
}

// Monolithic QFI for any scenario at a real size n.
inline QfiValue static_qfi(Scenario sc, const NoiseParams& pr, double n) {
    switch (sc) {
        case Scenario::StatePrep: return qfi_state_prep(pr.F, pr.k, n);
        case Scenario::Loss1: return qfi_loss_no_detection(pr.F, pr.k, pr.p, n);
        case Scenario::Loss2: return qfi_loss_with_detection(pr.F, pr.k, pr.p, n);
        case Scenario::Dephasing: return qfi_dephasing(pr.F, pr.k, pr.q, n);
        case Scenario::Combined: return qfi_combined(pr.F, pr.k, pr.p, pr.q, n);
    }
    throw std::logic_error("static_qfi: bad scenario");
}

// Equal continuous split: m * F(n/m). This is the form the optimizers and
// the worked partition numbers use.
inline QfiValue qfi_partitioned_equal(Scenario sc, const NoiseParams& pr, double n, double m) {
    detail::require(m >= 1.0, "m", "must be >= 1");
    detail::require(n >= m, "n", "must be >= m");
    const QfiValue sub = static_qfi(sc, pr, n / m);
    QfiValue q = QfiValue::from_log(sub.log_value + std::log(m), sc, pr, n, m);
    q.value = m * sub.value;  // one rounding, keeps the direct path exact
    return q;
}

// Sum of monolithic QFI over explicit integer sub-ensemble sizes.
inline QfiValue qfi_partitioned(Scenario sc, const NoiseParams& pr, const Allocation& alloc) {
    if (alloc.sizes.size() == 1)
        return static_qfi(sc, pr, static_cast<double>(alloc.sizes[0]));
    double acc_log = kNegInf;
    double acc = 0.0;
    for (auto s : alloc.sizes) {
        const QfiValue sub = static_qfi(sc, pr, static_cast<double>(s));
        acc_log = log_sum_exp(acc_log, sub.log_value);
        acc += sub.value;
    }
    QfiValue q = QfiValue::from_log(acc_log, sc, pr, static_cast<double>(alloc.n),
                                    static_cast<double>(alloc.m));
    if (acc > 0.0) q.value = acc;
    return q;
}

// Exact and approximate detection-advantage ratio F2/F1 >= 1 for a budget
// of n sensors in m sub-ensembles. `model` is the ratio of the
// uniform-shift form, which the two printed approximations expand.
struct LossRatio {
    double exact = 1.0;        // from the audited QFI expressions
    double model = 1.0;        // against the uniform-shift F1
    double approx = 1.0;       // 1 + (k/F) ((1+p)/(4kp))^x [2^x - (4p/(1+p))^x]
    double approx_high = 1.0;  // 1 + (k/F) ((1+p)/(2kp))^x
};

inline LossRatio loss_detection_ratio(double F, double k, double p, double n, double m) {
    detail::require(F > 0.0 && F <= 1.0, "F", "must lie in (0, 1]");
    detail::require(k > 0.0 && k <= 1.0, "k", "must lie in (0, 1]");
    detail::require(p > 0.0 && p <= 1.0, "p", "must lie in (0, 1]");
    detail::require(m >= 1.0 && n >= m, "m", "needs 1 <= m <= n");
    const double x = n / m;
    LossRatio r;
    if (p == 1.0) return r;
    // exact = D / (p^x S): D is the post-loss class sum, S the pre-loss one
    const double log_D = detail::log_loss1_denominator(F, k, p, x);
    const double log_S = log_sum_exp(detail::log_lambda_plus(F, k, x),
                                     detail::log_lambda_minus(F, k, x));
    r.exact = std::exp(log_D - x * std::log(p) - log_S);
    // model = 1 + [((1+p)/2)^x - p^x] / (p^x S)
    const double shift = log_diff_exp(x * std::log(0.5 * (1.0 + p)), x * std::log(p));
    r.model = 1.0 + std::exp(shift - x * std::log(p) - detail::log_class_sum(F, k, x));
    const double lk = std::log(k), lF = std::log(F);
    // 1 + (k/F) ((1+p)/(4kp))^x [2^x - (4p/(1+p))^x], factored through
    // ((1+p)/(2kp))^x so nothing overflows at large x
    const double lead = lk - lF + x * (std::log1p(p) - kLn2 - lk - std::log(p));
    r.approx = 1.0 + std::exp(lead) * -std::expm1(x * std::log(2.0 * p / (1.0 + p)));
    r.approx_high = 1.0 + std::exp(lead);
    return r;
}

// Leading orders of the detection-advantage ratio in the loss probability:
// ratio = 1 + c1 (1-p) + c2 (1-p)^2 + O((1-p)^3).
struct LossRatioExpansion {
    double c0 = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;

    double evaluate(double one_minus_p, int order) const {
        double r = c0 + c1 * one_minus_p;
        if (order >= 2) r += c2 * one_minus_p * one_minus_p;
        return r;
    }
};

inline LossRatioExpansion low_loss_ratio_expansion(double F, double k, double n, double m) {
    detail::require(m >= 1.0 && n >= m, "m", "needs 1 <= m <= n");
    const double x = n / m;
    // prefactor k n (2^x - 1) / (k + F (2^x - 2) k^x), log domain
    const double log_num = std::log(k) + std::log(n) + x * kLn2 + log1mexp(-x * kLn2);
    const double log_2x_minus_2 =
        x > 1.0 ? x * kLn2 + log1mexp((1.0 - x) * kLn2) : kNegInf;
    const double log_den =
        log_sum_exp(std::log(k), std::log(F) + log_2x_minus_2 + x * std::log(k));
    const double pref = std::exp(log_num - log_den);
    LossRatioExpansion e;
    e.c1 = pref / (2.0 * m);
    e.c2 = pref * (3.0 * m + n) / (8.0 * m * m);
    return e;
}

}  // namespace ghzpart
