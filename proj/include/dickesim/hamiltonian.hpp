#ifndef DICKESIM_HAMILTONIAN_HPP
#define DICKESIM_HAMILTONIAN_HPP

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dickesim/basis.hpp"
#include "dickesim/params.hpp"

namespace dickesim {

/// One decay channel of the conditional evolution.
///
/// `occupation` is the diagonal of C^dag C in the evolution basis (all
/// channels here have diagonal C^dag C). `action` gives, per source index,
/// the collapsed components of C|i> as (target label, amplitude) pairs in
/// the post-jump labelled basis; a channel with an empty action (gamma_s)
/// drains norm but cannot be resolved into a collapsed state.
struct JumpChannel {
    std::string name;              // "a_L", "a_R", "gamma_s"
    std::optional<int> detector;   // 0 = D0, 1 = D1, nullopt = unobserved
    double rate = 0.0;
    Eigen::VectorXd occupation;
    std::vector<std::vector<std::pair<std::string, std::complex<double>>>> action;

    bool collapsible() const { return !action.empty(); }
};

/// Dense non-Hermitian conditional Hamiltonian
///   H_eff = H_herm - (i/2) sum_k rate_k C_k^dag C_k
/// in a given basis, plus the decomposition handles.
struct EffectiveHamiltonian {
    BasisPtr basis;
    Eigen::MatrixXcd matrix;          // H_eff
    Eigen::MatrixXcd hermitian_part;  // H_herm
    std::vector<JumpChannel> channels;

    // Uniform diagonal shift (= delta_L) taking the interaction-picture
    // amplitudes c_nu to the rotating lambda frame lambda_nu = c_nu
    // exp(-i delta_L t). A multiple of the identity, so it only changes the
    // global phase; the integrator applies it for larger stable steps.
    double rotating_shift = 0.0;

    int dim() const { return static_cast<int>(matrix.rows()); }

    // Sum over channels of rate * <psi|C^dag C|psi>, plus the gamma_s drain:
    // the instantaneous total click/loss density of the conditional state.
    double loss_density(const Eigen::VectorXcd& amplitudes) const;
};

/// Assembles H_eff in `basis`. A CouplingProfile is only allowed with
/// SingleExcitation or FullTensor bases; without one the couplings are the
/// uniform g_L, g_R from params.
EffectiveHamiltonian build_hamiltonian(const SystemParams& params, const BasisPtr& basis,
                                       const std::optional<CouplingProfile>& profile = std::nullopt);

/// Detuning delta_R that minimises the generalized Rabi splitting for the
/// Dicke-ladder step m -> m+1:
///   delta_L - delta_R = ((m+1) g_R^2 - (n-m) g_L^2) / delta_L,
/// which for uniform g and m = 0 is delta_L - delta_R = (1-n) g^2 / delta_L.
double optimal_detuning(const SystemParams& params, int ladder_step = 0);

}  // namespace dickesim

#endif
