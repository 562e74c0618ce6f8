#ifndef DICKESIM_DYNAMICS_HPP
#define DICKESIM_DYNAMICS_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "dickesim/hamiltonian.hpp"
#include "dickesim/integrator.hpp"

namespace dickesim {

// Conditional (no-click) evolution i d(psi)/dt = H_eff psi, integrated in the
// rotating lambda frame (H_eff + rotating_shift * I); the shift is a multiple
// of the identity so it only removes a common phase. Amplitudes returned by
// state_at are the lambda-frame amplitudes.
class ConditionalEvolution {
public:
    ConditionalEvolution(const EffectiveHamiltonian& hamiltonian, const StateVector& psi0,
                         double t_end, const IntegratorControls& controls = {});

    const BasisPtr& basis() const { return basis_; }
    const DenseTrajectory& dense() const { return dense_; }
    double t_end() const { return dense_.t_end(); }

    StateVector state_at(double t) const;
    std::vector<std::pair<double, StateVector>> sample(const std::vector<double>& times) const;

private:
    BasisPtr basis_;
    DenseTrajectory dense_;
};

/// Integrates the conditional dynamics and samples it at `times` (plus the
/// adaptive nodes, available through the returned evolution's dense output).
ConditionalEvolution integrate_conditional(const EffectiveHamiltonian& hamiltonian,
                                           const StateVector& psi0, double t_end,
                                           const IntegratorControls& controls = {});

// Reduced two-level generator M with d(lambda)/dt = M lambda after adiabatic
// elimination of the excited level:
//   M = [ i n g^2/dL - k/2,                i sqrt(n) g^2/dL                  ]
//       [ i sqrt(n) g^2/dL,  i g^2/dL - i (dL - dR) - k/2 ]
Eigen::Matrix2cd transformed_generator(const SystemParams& params);

/// Ladder-step variant: multiplicities (n-m) and (m+1) replace n and 1.
Eigen::Matrix2cd transformed_generator_step(const SystemParams& params, int ladder_step);

struct EliminationReport {
    double max_amplitude_deviation = 0.0;  // max over t of |lambda_{0,1} full - reduced|
    double max_excited_population = 0.0;   // max over t of |lambda_2|^2
};

// Integrates the full 3-level collective system and the eliminated 2-level
// system from the same initial state and quantifies the approximation.
EliminationReport elimination_error(const SystemParams& params, double t_end,
                                    const IntegratorControls& controls = {});

}  // namespace dickesim

#endif
