#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "ghzpart/numeric.hpp"

// Static noise parameters and the elementary probabilities they induce:
// GHZ fidelity decay, visibility, the dephasing no-flip survival sum and
// the loss eigenvalue shift.

namespace ghzpart {

namespace detail {
inline void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw std::domain_error(field + ": " + what);
}
}  // namespace detail

// F: initialization fidelity, k: entangling-gate fidelity, p: per-sensor
// survival probability, q: per-sensor no-phase-flip probability.
// q = 1/2 is admitted as a boundary (it forces zero dephasing QFI).
struct NoiseParams {
    double F = 1.0;
    double k = 1.0;
    double p = 1.0;
    double q = 1.0;

    NoiseParams() = default;
    NoiseParams(double F_, double k_, double p_ = 1.0, double q_ = 1.0)
        : F(F_), k(k_), p(p_), q(q_) {
        detail::require(F > 0.0 && F <= 1.0, "F", "must lie in (0, 1]");
        detail::require(k > 0.0 && k <= 1.0, "k", "must lie in (0, 1]");
        detail::require(p >= 0.0 && p <= 1.0, "p", "must lie in [0, 1]");
        detail::require(q >= 0.5 && q <= 1.0, "q", "must lie in [1/2, 1]");
    }
};

// Dynamical rates. omega is only used by the Ramsey comparison.
struct RateParams {
    double eta = 0.0;
    double gamma = 0.0;
    double omega = 0.0;

    RateParams() = default;
    RateParams(double eta_, double gamma_, double omega_ = 0.0)
        : eta(eta_), gamma(gamma_), omega(omega_) {
        detail::require(eta >= 0.0, "eta", "must be >= 0");
        detail::require(gamma >= 0.0, "gamma", "must be >= 0");
    }
};

// F(n) = k^(n-1) F, evaluated as exp((n-1) ln k + ln F). n may be real.
inline double ghz_fidelity(double F, double k, double n) {
    detail::require(F > 0.0 && F <= 1.0, "F", "must lie in (0, 1]");
    detail::require(k > 0.0 && k <= 1.0, "k", "must lie in (0, 1]");
    detail::require(n >= 1.0, "n", "must be >= 1");
    return std::exp((n - 1.0) * std::log(k) + std::log(F));
}

// V(n) = (2^n F(n) - 1) / (2^n - 1), written as (F(n) - 2^-n) / (1 - 2^-n)
// so it stays finite for any n. Reaches -1/(2^n - 1) when F(n) underflows.
inline double visibility(double F, double k, double n) {
    const double fn = ghz_fidelity(F, k, n);
    const double tiny = std::exp2(-n);
    return (fn - tiny) / (1.0 - tiny);
}

// q~ = (1 + (2q - 1)^n) / 2: probability that an even number of phase flips
// hits an n-qubit GHZ state.
inline double no_flip_survival(double q, int n) {
    detail::require(q >= 0.5 && q <= 1.0, "q", "must lie in [1/2, 1]");
    detail::require(n >= 1, "n", "must be >= 1");
    return 0.5 * (1.0 + std::pow(2.0 * q - 1.0, n));
}

// The literal even-term binomial sum  sum_{even j} C(n,j) q^(n-j) (1-q)^j.
// Exact integer binomials limit n to 60.
inline double even_binomial_sum(double q, int n) {
    detail::require(q >= 0.0 && q <= 1.0, "q", "must lie in [0, 1]");
    detail::require(n >= 1, "n", "must be >= 1");
    if (n > 60) throw std::overflow_error("even_binomial_sum: n > 60");
    double acc = 0.0;
    for (int j = 0; j <= n; j += 2)
        acc += static_cast<double>(binomial_u64(n, j)) * std::pow(q, n - j) *
               std::pow(1.0 - q, j);
    return acc;
}

// delta-lambda = [(1+p)^n - (2p)^n] / 2^(n+1): the weight that nontrivial
// loss patterns deposit on each GHZ-pair eigenvalue of the top class,
// counting every lost-qubit multiplicity at 2^-(m+1).
inline double loss_eigenvalue_shift(double p, int n) {
    detail::require(p >= 0.0 && p <= 1.0, "p", "must lie in [0, 1]");
    detail::require(n >= 1, "n", "must be >= 1");
    if (p == 1.0) return 0.0;
    // [(1+p)^n - (2p)^n] / 2^(n+1) = exp(n ln(1+p) - (n+1) ln 2) (1 - e^d)
    const double a = n * std::log1p(p) - (n + 1.0) * kLn2;
    if (p == 0.0) return std::exp(a);
    const double d = n * std::log(2.0 * p / (1.0 + p));
    return std::exp(a) * -std::expm1(d);
}

namespace detail {

// Exact per-sign deposit on the source's own class from all loss patterns:
// the all-lost pattern lands 2^-n, not 2^-(n+1), which adds (1-p)^n/2^(n+1)
// on top of loss_eigenvalue_shift. Log domain, real n.
inline double log_loss_shift_exact(double p, double n) {
    if (p == 1.0) return kNegInf;
    const double a = n * std::log1p(p);
    const double c = p > 0.0 ? n * std::log1p(-p) : 0.0;
    // (1+p)^n - (2p)^n + (1-p)^n, factored by (1+p)^n
    double bracket;
    if (p == 0.0) {
        bracket = 2.0;  // 1 - 0 + 1
    } else {
        bracket = -std::expm1(n * std::log(2.0 * p / (1.0 + p))) + std::exp(c - a);
    }
    return a + std::log(bracket) - (n + 1.0) * kLn2;
}

}  // namespace detail

// p(t) = e^(-eta t).
inline double survival_prob(double eta, double t) {
    detail::require(eta >= 0.0, "eta", "must be >= 0");
    detail::require(t >= 0.0, "t", "must be >= 0");
    return std::exp(-eta * t);
}

// q(t) = (1 + e^(-gamma t)) / 2.
inline double dephasing_no_flip(double gamma, double t) {
    detail::require(gamma >= 0.0, "gamma", "must be >= 0");
    detail::require(t >= 0.0, "t", "must be >= 0");
    return 0.5 * (1.0 + std::exp(-gamma * t));
}

}  // namespace ghzpart
