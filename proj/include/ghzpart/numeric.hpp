#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

// Log-domain scalar helpers and the small derivative-free solvers used by
// the closed-form QFI expressions and the optimizers.

namespace ghzpart {

inline constexpr double kLn2 = 0.6931471805599453094172321214581766;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Raised when an optimum does not exist because every error parameter is
// perfect (the objective grows without bound).
struct UnboundedError : std::domain_error {
    using std::domain_error::domain_error;
};

// Raised when a root solver cannot find a sign change on its search bracket.
struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ln(1 - e^x) for x <= 0, accurate near both ends.
inline double log1mexp(double x) {
    if (x > 0.0) throw std::domain_error("log1mexp: x must be <= 0");
    if (x == 0.0) return kNegInf;
    return x > -kLn2 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

// ln(e^a + e^b).
inline double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = a > b ? a : b;
    const double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

// ln(e^a - e^b), requires a >= b; returns -inf when a == b.
inline double log_diff_exp(double a, double b) {
    if (b == kNegInf) return a;
    if (a < b) throw std::domain_error("log_diff_exp: needs a >= b");
    if (a == b) return kNegInf;
    return a + log1mexp(b - a);
}

// Sign-carrying log-domain value: sign * exp(ln_abs).
struct SignedLog {
    double ln_abs = kNegInf;
    int sign = 0;

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(ln_abs); }
};

// e^a - e^b with either ordering.
inline SignedLog signed_log_diff(double a, double b) {
    if (a == b) return {kNegInf, 0};
    if (a > b) return {log_diff_exp(a, b), +1};
    return {log_diff_exp(b, a), -1};
}

// Exact binomial coefficients; C(62,31) still fits in 64 bits.
inline std::uint64_t binomial_u64(int n, int r) {
    if (n < 0 || r < 0 || r > n) return 0;
    if (n > 62) throw std::overflow_error("binomial_u64: n > 62");
    std::uint64_t row[63] = {1};
    for (int i = 1; i <= n; ++i)
        for (int j = i; j >= 1; --j) row[j] += row[j - 1];
    return row[r];
}

// Golden-section maximization of a unimodal function on [a, b].
inline double golden_section_max(const std::function<double(double)>& f, double a, double b,
                                 double xtol) {
    constexpr double invphi = 0.6180339887498948482;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

// Sign-change bisection; assumes f(a) and f(b) have opposite signs.
inline double bisect_root(const std::function<double(double)>& f, double a, double b,
                          double xtol) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) throw BracketError("bisect_root: no sign change on [a, b]");
    while (b - a > xtol) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;  // interval no longer representable
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Central finite difference with relative step.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double rel_step = 1e-5) {
    const double h = (x != 0.0 ? std::abs(x) : 1.0) * rel_step;
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace ghzpart
