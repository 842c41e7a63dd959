#pragma once

#include <cmath>
#include <random>

#include "ghzpart/ghzpart.hpp"

// Shared helpers for the test suites: random GHZ-diagonal spectra, random
// noise parameters in the physically sensible regime, and the oracle-side
// evaluation of each static scenario.

namespace ghztest {

inline ghzpart::GhzSpectrum random_spectrum(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ghzpart::GhzSpectrum s(n);
    double total = 0.0;
    for (std::size_t c = 0; c < s.num_classes(); ++c) {
        s.plus[c] = u(rng);
        s.minus[c] = u(rng);
        total += s.plus[c] + s.minus[c];
    }
    for (std::size_t c = 0; c < s.num_classes(); ++c) {
        s.plus[c] /= total;
        s.minus[c] /= total;
    }
    return s;
}

struct ParamDraw {
    double F, k, p, q;
};

inline ParamDraw draw_params(std::mt19937& rng) {
    std::uniform_real_distribution<double> fd(0.9, 1.0), kd(0.9, 1.0), pd(0.8, 1.0),
        qd(0.75, 1.0);
    return {fd(rng), kd(rng), pd(rng), qd(rng)};
}

// Closed-form-independent QFI for scenario `sc` at integer size n, through
// the spectrum channels (GHZ-diagonal route). Detected loss enters as the p^n
// post-selection fraction.
inline double oracle_qfi_spectrum(ghzpart::Scenario sc, const ghzpart::NoiseParams& pr,
                                  int n) {
    using namespace ghzpart;
    GhzSpectrum spec = build_depolarized_ghz(pr.F, pr.k, n);
    double post = 1.0;
    switch (sc) {
        case Scenario::StatePrep: break;
        case Scenario::Loss1: spec = apply_loss_channel(spec, pr.p); break;
        case Scenario::Loss2: post = std::pow(pr.p, n); break;
        case Scenario::Dephasing: spec = apply_dephasing_channel(spec, pr.q); break;
        case Scenario::Combined:
            spec = apply_dephasing_channel(spec, pr.q);
            post = std::pow(pr.p, n);
            break;
    }
    return post * qfi_ghz_diagonal(spec).value;
}

// Same scenarios through the dense density-matrix channels and the SLD
// eigendecomposition; fully independent of the spectrum kernel (n <= 8).
inline double oracle_qfi_sld(ghzpart::Scenario sc, const ghzpart::NoiseParams& pr, int n) {
    using namespace ghzpart;
    const DensityMatrix rho0 = density_from_spectrum(build_depolarized_ghz(pr.F, pr.k, n));
    double post = 1.0, p_channel = 1.0, q_channel = 1.0;
    switch (sc) {
        case Scenario::StatePrep: break;
        case Scenario::Loss1: p_channel = pr.p; break;
        case Scenario::Loss2: post = std::pow(pr.p, n); break;
        case Scenario::Dephasing: q_channel = pr.q; break;
        case Scenario::Combined:
            q_channel = pr.q;
            post = std::pow(pr.p, n);
            break;
    }
    const DensityMatrix rho = apply_channels_dense(rho0, p_channel, q_channel);
    return post * qfi_sld(rho).value;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace ghztest
