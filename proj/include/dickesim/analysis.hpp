#ifndef DICKESIM_ANALYSIS_HPP
#define DICKESIM_ANALYSIS_HPP

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "dickesim/dynamics.hpp"

namespace dickesim {

// |n,m>: equal-amplitude superposition of all weight-m atomic strings.
// With no basis given the state lives on an AtomicStrings basis over its
// support; otherwise the given basis must contain every "<string>|vac" label.
StateVector dicke_state(int n, int m);
StateVector dicke_state(int n, int m, const BasisPtr& basis);

// Independent construction through the collective lowering operators
// s_k = sum_j |k>_j<e|_j applied to |e...e>, with the 1/sqrt(n! m! (n-m)!)
// normalization. Used to cross-check the combinatorial enumeration.
StateVector dicke_state_collective(int n, int m);

// |<phi|psi>|^2, global-phase insensitive. States over string-labelled bases
// are matched label by label; otherwise the bases must carry identical labels.
double fidelity(const StateVector& psi, const StateVector& phi);

// Expansion of one reduced-basis vector into FullTensor labels.
std::vector<std::pair<std::string, std::complex<double>>> expand_label(
    const BasisDescriptor& descriptor, const std::string& label);

struct OracleReport {
    double max_deviation = 0.0;  // max over t_grid and components after projection
    int full_dimension = 0;
};

// Certifies a reduced basis against the brute-force FullTensor evolution:
// both integrations start from matched initial states (index 0 of the reduced
// basis), the full state is projected back through expand_label, and the
// worst amplitude deviation over t_grid is reported. The full pipeline never
// uses the symmetric reduction.
OracleReport oracle_compare(const SystemParams& params, const BasisDescriptor& reduced,
                            const std::vector<double>& t_grid,
                            const IntegratorControls& controls = {});

}  // namespace dickesim

#endif
