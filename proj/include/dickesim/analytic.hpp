#ifndef DICKESIM_ANALYTIC_HPP
#define DICKESIM_ANALYTIC_HPP

#include <complex>
#include <utility>

#include "dickesim/params.hpp"

namespace dickesim {

/// Effective Raman frequencies of the reduced two-level dynamics.
struct RabiPair {
    double omega0 = 0.0;  // common phase rate
    double omega1 = 0.0;  // oscillation (splitting) rate, >= 0
};

using AmplitudePair = std::pair<std::complex<double>, std::complex<double>>;

// General expressions (uniform g, delta_L != 0):
//   omega0 = (n+1) g^2/delta_L - (delta_L - delta_R)
//   omega1 = sqrt([(n+1) g^2/delta_L]^2 + (delta_L-delta_R)^2
//                 + 2 (n-1)(delta_L-delta_R) g^2/delta_L)
RabiPair rabi_frequencies(const SystemParams& params);

// Same for the Dicke-ladder step m -> m+1, where the collective couplings
// carry multiplicities (n-m) and (m+1); m = 0 reproduces rabi_frequencies.
RabiPair rabi_frequencies_step(const SystemParams& params, int ladder_step);

// Closed-form conditional amplitudes (lambda0, lambda1) of the eliminated
// two-level system, including the exp(-kappa t/2) and exp(i omega0 t/2)
// factors. Throws std::domain_error when omega1 = 0 (degenerate limit).
AmplitudePair amplitudes_general(const SystemParams& params, double t);

// Specialization at the optimal-detuning condition:
//   lambda0 = e^(-kt/2) e^(i w0 t/2) cos(w1 t/2)
//   lambda1 = i e^(-kt/2) e^(i w0 t/2) sin(w1 t/2)
// Throws std::invalid_argument when the condition is violated beyond tolerance.
AmplitudePair amplitudes_resonant(const SystemParams& params, double t);

// D1 click probability within waiting time T: adaptive-Simpson quadrature of
// kappa * |lambda1(t)|^2 over [0, T] (absolute tolerance 1e-8), scaled by the
// detector efficiency. At the optimal detuning the integrand is
// kappa e^(-kappa t) sin^2(omega1 t/2).
double success_probability_integral(const SystemParams& params, double T);

// Closed form at the optimal detuning, T -> infinity, unit detectors:
//   p_suc = 2 n g^4 / (delta_L^2 kappa^2 + 4 n g^4)
double success_probability_closed(const SystemParams& params);

// Ladder-step generalization: n replaced by (n-m)(m+1).
double success_probability_closed_step(const SystemParams& params, int ladder_step);

/// 1 - (1-p)^trials.
double cumulative_success(double p_single, int trials);

// Adiabatic-elimination estimate of the peak excited-state occupation:
// ((sqrt(n)+1) g / delta_L)^2.
double excited_population_bound(const SystemParams& params);

}  // namespace dickesim

#endif
