#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ghzpart/noise.hpp"
#include "ghzpart/qfi.hpp"

// Exact brute-force verification engine for small qubit counts. States are
// kept either as GHZ-basis eigenvalue tables or as dense density matrices;
// the loss and dephasing channels exist in three independent forms (count
// kernel, per-pattern enumeration, dense per-qubit maps) so each can audit
// the others, and QFI comes both from the GHZ-diagonal formula and from a
// full SLD eigendecomposition.

namespace ghzpart {

constexpr int kMaxSpectrumQubits = 12;
constexpr int kMaxDenseQubits = 10;
constexpr int kMaxDenseChannelQubits = 8;

// Eigenvalue table of a GHZ-diagonal n-qubit state. Classes are indexed by
// the lexicographically smaller bitstring of each {i, ~i} pair, i.e. by
// i in [0, 2^(n-1)); plus/minus hold the eigenvalues of (|i> +- |~i>)/sqrt2.
struct GhzSpectrum {
    int n = 1;
    std::vector<double> plus;
    std::vector<double> minus;

    explicit GhzSpectrum(int n_qubits) : n(n_qubits) {
        if (n < 1 || n > kMaxSpectrumQubits)
            throw std::domain_error("GhzSpectrum: need 1 <= n <= 12");
        const std::size_t classes = std::size_t{1} << (n - 1);
        plus.assign(classes, 0.0);
        minus.assign(classes, 0.0);
    }

    std::size_t num_classes() const { return plus.size(); }

    double total() const {
        double t = 0.0;
        for (std::size_t i = 0; i < plus.size(); ++i) t += plus[i] + minus[i];
        return t;
    }
};

// rho = V |GHZ><GHZ| + (1 - V) I / 2^n as a GHZ spectrum: the top class
// carries (F(n), (1 - F(n)) / (2^n - 1)), every other eigenvalue equals
// the minus entry.
inline GhzSpectrum build_depolarized_ghz(double F, double k, int n) {
    GhzSpectrum s(n);
    const double fn = ghz_fidelity(F, k, static_cast<double>(n));
    const double rest = (1.0 - fn) / (std::exp2(n) - 1.0);
    for (std::size_t c = 0; c < s.num_classes(); ++c) {
        s.plus[c] = rest;
        s.minus[c] = rest;
    }
    s.plus[0] = fn;
    return s;
}

namespace detail {

// Per-sign deposit kernel of the loss channel between classes at Hamming
// distance d (computed on the canonical representatives). A pattern losing
// m < n qubits spreads a GHZ basis state uniformly at 2^-(m+1) per
// destination basis state; losing all n qubits yields I/2^n, i.e. 2^-n per
// basis state.
inline std::vector<double> loss_kernel(int n, double p) {
    std::vector<double> kappa(static_cast<std::size_t>(n), 0.0);
    std::vector<double> pattern_w(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m)
        pattern_w[static_cast<std::size_t>(m)] =
            std::pow(p, n - m) * std::pow(1.0 - p, m);
    for (int d = 0; d < n; ++d) {
        double acc = 0.0;
        for (int m = std::max(d, 1); m <= n - 1; ++m)
            acc += static_cast<double>(binomial_u64(n - d, m - d)) *
                   pattern_w[static_cast<std::size_t>(m)] * std::exp2(-(m + 1));
        for (int m = n - d; m <= n - 1; ++m)
            acc += static_cast<double>(binomial_u64(d, m - (n - d))) *
                   pattern_w[static_cast<std::size_t>(m)] * std::exp2(-(m + 1));
        acc += pattern_w[static_cast<std::size_t>(n)] * std::exp2(-n);
        kappa[static_cast<std::size_t>(d)] = acc;
    }
    return kappa;
}

}  // namespace detail

// Independent per-qubit loss with survival probability p; lost qubits are
// replaced by maximally mixed states. Preserves GHZ diagonality and trace.
inline GhzSpectrum apply_loss_channel(const GhzSpectrum& in, double p) {
    if (p < 0.0 || p > 1.0) throw std::domain_error("p: must lie in [0, 1]");
    if (p == 1.0) return in;
    const int n = in.n;
    const auto kappa = detail::loss_kernel(n, p);
    const double pn = std::pow(p, n);
    GhzSpectrum out(n);
    const std::size_t classes = in.num_classes();
    for (std::size_t j = 0; j < classes; ++j) {
        double dep = 0.0;
        for (std::size_t i = 0; i < classes; ++i) {
            const int d = std::popcount(static_cast<std::uint64_t>(i ^ j));
            dep += (in.plus[i] + in.minus[i]) * kappa[static_cast<std::size_t>(d)];
        }
        out.plus[j] = pn * in.plus[j] + dep;
        out.minus[j] = pn * in.minus[j] + dep;
    }
    return out;
}

// Exhaustive per-pattern audit of the loss channel (2^n subsets), kept for
// small n as an independent check of the counting kernel.
inline GhzSpectrum apply_loss_channel_patterns(const GhzSpectrum& in, double p) {
    if (p < 0.0 || p > 1.0) throw std::domain_error("p: must lie in [0, 1]");
    const int n = in.n;
    if (n > 6) throw std::domain_error("apply_loss_channel_patterns: n > 6");
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    const std::uint64_t canon_mask = full >> 1;
    GhzSpectrum out(n);
    for (std::uint64_t pattern = 0; pattern <= full; ++pattern) {
        const int m = std::popcount(pattern);
        const double w = std::pow(p, n - m) * std::pow(1.0 - p, m);
        if (m == 0) {
            for (std::size_t c = 0; c < in.num_classes(); ++c) {
                out.plus[c] += w * in.plus[c];
                out.minus[c] += w * in.minus[c];
            }
            continue;
        }
        // each visited class takes 2^-(m+1) per sign; when every qubit is
        // lost the canonicalization visits each class twice, which sums to
        // the 2^-n of the maximally mixed state
        const double per_state = std::exp2(-(m + 1));
        for (std::size_t c = 0; c < in.num_classes(); ++c) {
            const double weight = (in.plus[c] + in.minus[c]) * w;
            if (weight == 0.0) continue;
            // destinations: c with the lost bits replaced by every value
            std::uint64_t sub = pattern;
            while (true) {  // iterate all subsets of `pattern`, incl. 0
                std::uint64_t dest = (static_cast<std::uint64_t>(c) & ~pattern) | sub;
                if (dest & ~canon_mask) dest = ~dest & full;  // canonicalize
                out.plus[dest] += weight * per_state;
                out.minus[dest] += weight * per_state;
                if (sub == 0) break;
                sub = (sub - 1) & pattern;
            }
        }
    }
    return out;
}

// Independent per-qubit phase flips with no-flip probability q: within each
// class the pair mixes with weight q~ = (1 + (2q - 1)^n) / 2.
inline GhzSpectrum apply_dephasing_channel(const GhzSpectrum& in, double q) {
    const double qt = no_flip_survival(q, in.n);
    GhzSpectrum out(in.n);
    for (std::size_t c = 0; c < in.num_classes(); ++c) {
        out.plus[c] = qt * in.plus[c] + (1.0 - qt) * in.minus[c];
        out.minus[c] = (1.0 - qt) * in.plus[c] + qt * in.minus[c];
    }
    return out;
}

// QFI of a GHZ-diagonal probe under the collective phase generator: each
// class contributes (n - 2 popcount)^2 (lam+ - lam-)^2 / (lam+ + lam-).
// Only the top class has the full n^2 phase weight.
inline QfiValue qfi_ghz_diagonal(const GhzSpectrum& s) {
    double acc = 0.0;
    for (std::size_t c = 0; c < s.num_classes(); ++c) {
        const double sum = s.plus[c] + s.minus[c];
        if (sum <= 0.0) continue;
        const double diff = s.plus[c] - s.minus[c];
        const double w = s.n - 2.0 * std::popcount(static_cast<std::uint64_t>(c));
        acc += w * w * diff * diff / sum;
    }
    return QfiValue::from_value(acc, Scenario::StatePrep, NoiseParams{},
                                static_cast<double>(s.n));
}

// Dense Hermitian density matrix for the SLD cross-check path.
struct DensityMatrix {
    int n = 1;
    Eigen::MatrixXcd rho;

    DensityMatrix(int n_qubits, Eigen::MatrixXcd mat) : n(n_qubits), rho(std::move(mat)) {
        if (n < 1 || n > kMaxDenseQubits)
            throw std::domain_error("DensityMatrix: need 1 <= n <= 10");
        const Eigen::Index dim = Eigen::Index{1} << n;
        if (rho.rows() != dim || rho.cols() != dim)
            throw std::domain_error("DensityMatrix: dimension mismatch");
        if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
            throw std::domain_error("DensityMatrix: not Hermitian");
        if (std::abs(rho.trace().real() - 1.0) > 1e-12 || std::abs(rho.trace().imag()) > 1e-12)
            throw std::domain_error("DensityMatrix: trace != 1");
    }
};

inline DensityMatrix density_from_spectrum(const GhzSpectrum& s) {
    if (s.n > kMaxDenseQubits) throw std::domain_error("density_from_spectrum: n > 10");
    const Eigen::Index dim = Eigen::Index{1} << s.n;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    const std::uint64_t full = (std::uint64_t{1} << s.n) - 1;
    for (std::size_t c = 0; c < s.num_classes(); ++c) {
        const auto i = static_cast<Eigen::Index>(c);
        const auto ibar = static_cast<Eigen::Index>(~static_cast<std::uint64_t>(c) & full);
        const double diag = 0.5 * (s.plus[c] + s.minus[c]);
        const double off = 0.5 * (s.plus[c] - s.minus[c]);
        rho(i, i) += diag;
        rho(ibar, ibar) += diag;
        rho(i, ibar) += off;
        rho(ibar, i) += off;
    }
    return DensityMatrix(s.n, std::move(rho));
}

// GHZ-basis projection <psi_(i,+-)| rho |psi_(i,+-)> of a dense state.
inline GhzSpectrum spectrum_from_density(const DensityMatrix& dm) {
    GhzSpectrum s(dm.n);
    const std::uint64_t full = (std::uint64_t{1} << dm.n) - 1;
    for (std::size_t c = 0; c < s.num_classes(); ++c) {
        const auto i = static_cast<Eigen::Index>(c);
        const auto ibar = static_cast<Eigen::Index>(~static_cast<std::uint64_t>(c) & full);
        const double diag = 0.5 * (dm.rho(i, i).real() + dm.rho(ibar, ibar).real());
        const double off = dm.rho(i, ibar).real();
        s.plus[c] = diag + off;
        s.minus[c] = diag - off;
    }
    return s;
}

// Dense per-qubit loss (partial trace, reinsert I/2) then per-qubit
// dephasing; the qubit maps commute so the order is immaterial.
inline DensityMatrix apply_channels_dense(const DensityMatrix& dm, double p, double q) {
    if (dm.n > kMaxDenseChannelQubits)
        throw std::domain_error("apply_channels_dense: n > 8");
    if (p < 0.0 || p > 1.0) throw std::domain_error("p: must lie in [0, 1]");
    if (q < 0.5 || q > 1.0) throw std::domain_error("q: must lie in [1/2, 1]");
    const Eigen::Index dim = Eigen::Index{1} << dm.n;
    Eigen::MatrixXcd rho = dm.rho;
    for (int bit = 0; bit < dm.n; ++bit) {
        const Eigen::Index mask = Eigen::Index{1} << bit;
        if (p < 1.0) {
            Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(dim, dim);
            for (Eigen::Index a = 0; a < dim; ++a)
                for (Eigen::Index b = 0; b < dim; ++b) {
                    std::complex<double> v = p * rho(a, b);
                    if ((a & mask) == (b & mask))
                        v += 0.5 * (1.0 - p) *
                             (rho(a & ~mask, b & ~mask) + rho(a | mask, b | mask));
                    next(a, b) = v;
                }
            rho.swap(next);
        }
        if (q < 1.0) {
            const double shrink = 2.0 * q - 1.0;
            for (Eigen::Index a = 0; a < dim; ++a)
                for (Eigen::Index b = 0; b < dim; ++b)
                    if ((a & mask) != (b & mask)) rho(a, b) *= shrink;
        }
    }
    return DensityMatrix(dm.n, std::move(rho));
}

// SLD quantum Fisher information of an arbitrary probe state under the
// collective phase generator G = (1/2) sum_i Z_i:
//   F = 2 sum_(j,l) (lam_j - lam_l)^2 / (lam_j + lam_l) |<j|G|l>|^2.
inline QfiValue qfi_sld(const DensityMatrix& dm) {
    const Eigen::Index dim = dm.rho.rows();
    Eigen::VectorXd gdiag(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        gdiag(i) = 0.5 * (dm.n - 2 * std::popcount(static_cast<std::uint64_t>(i)));

    // our states are real symmetric; use the real solver when possible
    Eigen::VectorXd evals;
    Eigen::MatrixXcd gwidth;
    if (dm.rho.imag().cwiseAbs().maxCoeff() < 1e-14) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dm.rho.real());
        if (es.info() != Eigen::Success)
            throw std::runtime_error("qfi_sld: eigendecomposition failed");
        evals = es.eigenvalues();
        const Eigen::MatrixXd gv = es.eigenvectors().transpose() *
                                   gdiag.asDiagonal() * es.eigenvectors();
        gwidth = gv.cast<std::complex<double>>();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dm.rho);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("qfi_sld: eigendecomposition failed");
        evals = es.eigenvalues();
        gwidth = es.eigenvectors().adjoint() * gdiag.asDiagonal() * es.eigenvectors();
    }

    double acc = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index l = 0; l < dim; ++l) {
            const double lj = evals(j) > 1e-15 ? evals(j) : 0.0;
            const double ll = evals(l) > 1e-15 ? evals(l) : 0.0;
            const double sum = lj + ll;
            if (sum <= 0.0) continue;
            const double diff = lj - ll;
            acc += 2.0 * diff * diff / sum * std::norm(gwidth(j, l));
        }
    return QfiValue::from_value(acc, Scenario::StatePrep, NoiseParams{},
                                static_cast<double>(dm.n));
}

}  // namespace ghzpart
