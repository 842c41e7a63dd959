#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ghzpart/noise.hpp"
#include "ghzpart/numeric.hpp"
#include "ghzpart/qfi.hpp"

// Noisy partitioned-GHZ Ramsey spectroscopy versus the noiseless one-axis
// twisting spin-squeezed-state bound: the binary-measurement signal, the
// exact error-propagation variance, its optimal operating point, and the
// crossing-time criterion deciding when noisy GHZ wins.

namespace ghzpart {

struct RamseyScenario {
    NoiseParams params;
    RateParams rates;  // omega lives here
    Allocation alloc;
    double T = 1.0;  // total time budget

    RamseyScenario() = default;
    RamseyScenario(NoiseParams pr, RateParams rt, Allocation al, double T_)
        : params(pr), rates(rt), alloc(std::move(al)), T(T_) {
        if (T <= 0.0) throw std::domain_error("T: must be > 0");
    }
};

struct SqueezingState {
    std::int64_t n = 2;
    double phi = 0.0;  // twisting angle 2 chi t_H
    double xi2 = 1.0;  // Kitagawa-Ueda squeezing parameter
};

// Kitagawa-Ueda squeezing parameter of the one-axis-twisted state:
//   xi_S^2 = 1 - (n - 1) C / 4,
//   C = sqrt[(1 - cos^(n-2) phi)^2 + 16 sin^2(phi/2) cos^(2n-4)(phi/2)]
//       - (1 - cos^(n-2) phi).
// Large powers of cosines go through exp/log with explicit sign handling
// past phi = pi/2.
inline double xi_s_squared(std::int64_t n, double phi) {
    if (n < 2) throw std::domain_error("n: must be >= 2");
    if (phi < 0.0 || phi > std::acos(-1.0) + 1e-12)
        throw std::domain_error("phi: must lie in [0, pi]");
    const double c = std::cos(phi);
    double cpow;  // cos^(n-2) phi
    if (n == 2) {
        cpow = 1.0;
    } else if (c == 0.0) {
        cpow = 0.0;
    } else {
        const double mag = std::exp((n - 2.0) * std::log(std::abs(c)));
        cpow = (c < 0.0 && ((n - 2) & 1)) ? -mag : mag;
    }
    const double ch = std::cos(0.5 * phi);  // >= 0 on [0, pi]
    const double chpow = n == 2 ? 1.0
                                : (ch == 0.0 ? 0.0
                                             : std::exp((2.0 * n - 4.0) * std::log(ch)));
    const double sh = std::sin(0.5 * phi);
    const double a = 1.0 - cpow;
    const double C = std::sqrt(a * a + 16.0 * sh * sh * chpow) - a;
    return 1.0 - (n - 1.0) * C / 4.0;
}

// First nontrivial minimum of xi_S^2 over the twisting angle: a fine scan
// brackets the first local minimum, then golden section refines it.
inline SqueezingState minimize_xi_s(std::int64_t n) {
    if (n < 3) throw std::domain_error("n: must be >= 3");
    const double hi = 0.5 * std::acos(-1.0);
    const int samples = 4000;
    double prev_phi = hi / samples, prev = xi_s_squared(n, prev_phi);
    double lo_br = 0.0, hi_br = 0.0;
    double curr_phi = 0.0, curr = 0.0;
    bool falling = false;
    for (int i = 2; i <= samples; ++i) {
        curr_phi = hi * i / samples;
        curr = xi_s_squared(n, curr_phi);
        if (curr < prev) {
            falling = true;
        } else if (falling) {  // first turn upward brackets the minimum
            lo_br = curr_phi - 2.0 * hi / samples;
            hi_br = curr_phi;
            break;
        }
        prev = curr;
        prev_phi = curr_phi;
    }
    if (hi_br == 0.0) throw std::runtime_error("minimize_xi_s: no interior minimum found");
    const auto neg = [n](double phi) { return -xi_s_squared(n, phi); };
    const double phi_star = golden_section_max(neg, lo_br, hi_br, 1e-13 * hi_br);
    return {n, phi_star, xi_s_squared(n, phi_star)};
}

// Noiseless OAT bound on the frequency-estimation variance in the
// sequential scheme: xi_S^2 / (n t T).
inline double var_omega_oat(std::int64_t n, double xi2, double t, double T) {
    if (n < 1 || xi2 <= 0.0 || t <= 0.0 || T <= 0.0)
        throw std::domain_error("var_omega_oat: all arguments must be positive");
    return xi2 / (n * t * T);
}

// Probability of the 0 outcome of the GHZ Ramsey sequence with noisy
// preparation, dephasing during encoding and a noisy inverse circuit:
//   P0 = 1/2 + (1/2) F k^(n-1) V(n) e^(-n gamma t) cos(n omega t).
inline double p0_ghz(const NoiseParams& pr, double n, double omega, double gamma, double t) {
    if (t < 0.0 || gamma < 0.0) throw std::domain_error("p0_ghz: need t, gamma >= 0");
    const double contrast = ghz_fidelity(pr.F, pr.k, n) * visibility(pr.F, pr.k, n) *
                            std::exp(-n * gamma * t);
    return 0.5 + 0.5 * contrast * std::cos(n * omega * t);
}

namespace detail {

// ln of F^2 [F (2k)^x - k]^2, shared by the variance expressions.
inline double log_signal_sq(double F, double k, double x) {
    const SignedLog d = signed_log_diff(std::log(F) + x * std::log(2.0 * k), std::log(k));
    return 2.0 * std::log(F) + 2.0 * d.ln_abs;
}

// ln of (2^x - 1)^2 k^(4 - 2x).
inline double log_noise_sq(double k, double x) {
    return 2.0 * (x * kLn2 + log1mexp(-x * kLn2)) + (4.0 - 2.0 * x) * std::log(k);
}

}  // namespace detail

// Exact sequential-scheme estimation variance of omega from error
// propagation through P0, with detected loss folded in; n/m sensors per
// sub-ensemble and an overall 1/m:
//   Var = [k^(4-2x)(2^x-1)^2 e^(x(2g+e)t) - F^2(F(2k)^x-k)^2 cos^2(x w t) e^(x e t)]
//         / (m x^2 F^2 (F(2k)^x - k)^2 sin^2(x w t) t T),   x = n/m.
inline double var_omega_ghz(const NoiseParams& pr, double n, double m, double omega,
                            double gamma, double eta, double t, double T) {
    if (m < 1.0 || n < m) throw std::domain_error("m: needs 1 <= m <= n");
    if (t <= 0.0 || T <= 0.0) throw std::domain_error("var_omega_ghz: need t, T > 0");
    const double x = n / m;
    const double phase = x * omega * t;
    const double s = std::sin(phase);
    if (std::abs(s) < 1e-9)
        throw std::domain_error("var_omega_ghz: degenerate operating point, "
                                "sin(n omega t / m) = 0");
    const double log_sig = detail::log_signal_sq(pr.F, pr.k, x);
    const double lnA = detail::log_noise_sq(pr.k, x) + x * (2.0 * gamma + eta) * t;
    const double c = std::cos(phase);
    const double lnB =
        c != 0.0 ? log_sig + 2.0 * std::log(std::abs(c)) + x * eta * t : kNegInf;
    const double lnC = std::log(m) + 2.0 * std::log(x) + log_sig +
                       2.0 * std::log(std::abs(s)) + std::log(t) + std::log(T);
    if (lnB >= lnA) return 0.0;  // perfect contrast at the operating point
    return std::exp(log_diff_exp(lnA, lnB) - lnC);
}

// Variance at the optimal operating point n omega t / m = (2j+1) pi/2,
// (n/m)(2 gamma + eta) t = 1:
//   Var = e (2^x - 1)^2 (2 gamma + eta) / (F^2 k^(2x-4) [F(2k)^x - k]^2 n T).
inline double var_omega_ghz_optimal(const NoiseParams& pr, double n, double m, double gamma,
                                    double eta, double T) {
    if (m < 1.0 || n < m) throw std::domain_error("m: needs 1 <= m <= n");
    if (T <= 0.0) throw std::domain_error("T: must be > 0");
    const double rate = 2.0 * gamma + eta;
    if (rate <= 0.0) throw std::domain_error("var_omega_ghz_optimal: both rates are 0");
    const double x = n / m;
    const double lv = 1.0 + detail::log_noise_sq(pr.k, x) + std::log(rate) -
                      detail::log_signal_sq(pr.F, pr.k, x) - std::log(n) - std::log(T);
    return std::exp(lv);
}

// Scaled crossing time (n/m)(2 gamma + eta) t_cross at which the noisy GHZ
// variance meets the noiseless OAT bound; >= 1 means the GHZ strategy can
// reach its optimal cycle length before the squeezed state overtakes it:
//   X = n F^2 k^(2x-4) [F(2k)^x - k]^2 xi2 / (e m (2^x - 1)^2).
// The rates cancel out of the scaled form.
inline double crossing_time(const NoiseParams& pr, double n, double m, double /*gamma*/,
                            double /*eta*/, double xi2) {
    if (m < 1.0 || n < m) throw std::domain_error("m: needs 1 <= m <= n");
    if (xi2 <= 0.0) throw std::domain_error("xi2: must be > 0");
    const double x = n / m;
    const double lv = std::log(n) + detail::log_signal_sq(pr.F, pr.k, x) + std::log(xi2) -
                      1.0 - std::log(m) - detail::log_noise_sq(pr.k, x);
    return std::exp(lv);
}

}  // namespace ghzpart
