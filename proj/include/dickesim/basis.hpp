#ifndef DICKESIM_BASIS_HPP
#define DICKESIM_BASIS_HPP

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace dickesim {

// Hilbert-space sectors supported by the simulator.
//
// ReducedSymmetric{n}  : {|phi0>, |phi1>, |phi2>} collective 3-state basis.
// SingleExcitation{n}  : the 2n+1 states {|0..0>|L>, |e_i>|vac>, |1_i>|R>},
//                        supports per-atom couplings.
// SymmetricLadder{n,m} : 3-state basis for the m -> m+1 Dicke-ladder step.
// FullTensor{n}        : reachable set of (atoms in {0,1,e})^n x cavity
//                        occupations, seeded by BFS from an initial label.
// AtomicStrings{n}     : labelled atomic-string basis (cavity in vacuum),
//                        used for collapsed states and Dicke targets.

struct ReducedSymmetric { int n = 1; };
struct SingleExcitation { int n = 1; };
struct SymmetricLadder  { int n = 1; int m = 0; };
struct FullTensor       { int n = 1; int cap = 4; };
struct AtomicStrings    { int n = 1; };

using BasisDescriptor =
    std::variant<ReducedSymmetric, SingleExcitation, SymmetricLadder, FullTensor, AtomicStrings>;

// Label conventions (atom 1 is the leftmost / most significant character):
//   FullTensor / SingleExcitation:  "<atoms>|<cavity>", atoms over {0,1,e},
//                                   cavity one of vac, L, R, LR.
//   AtomicStrings:                  "<atoms>|vac".
//   ReducedSymmetric:               phi0, phi1, phi2.
//   SymmetricLadder{n,m}:           sym(n,m)|L, sym(n,m;e)|vac, sym(n,m+1)|R.
class IndexedBasis {
public:
    IndexedBasis(BasisDescriptor desc, std::vector<std::string> labels);

    const BasisDescriptor& descriptor() const { return desc_; }
    int dim() const { return static_cast<int>(labels_.size()); }
    const std::string& label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }
    const std::vector<std::string>& labels() const { return labels_; }
    int index_of(const std::string& label) const;           // -1 if absent
    int require_index(const std::string& label) const;      // throws if absent
    int n_atoms() const;

private:
    BasisDescriptor desc_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> index_;
};

using BasisPtr = std::shared_ptr<const IndexedBasis>;

/// Complex amplitude vector over an IndexedBasis.
struct StateVector {
    BasisPtr basis;
    Eigen::VectorXcd amplitudes;

    double norm_sq() const { return amplitudes.squaredNorm(); }
};

/// Unit vector on basis state `index`.
StateVector basis_state(const BasisPtr& basis, int index);

// Builds the index table for a descriptor. FullTensor requires one or more
// seed labels; the basis is the BFS closure of the seeds under the nonzero
// couplings of the effective Hamiltonian, ordered lexicographically over
// (atomic string, n_L, n_R).
BasisPtr build_basis(const BasisDescriptor& descriptor,
                     const std::vector<std::string>& initial_hint = {});

/// All n-char strings over {'0', one} with exactly m occurrences of `one`,
/// sorted lexicographically.
std::vector<std::string> atomic_strings_of_weight(int n, int m, char one = '1');

// Cavity label helpers shared by the Hamiltonian builder and jump machinery.
std::string cavity_token(int n_L, int n_R);
std::pair<int, int> parse_cavity_token(const std::string& token);
std::pair<std::string, std::string> split_label(const std::string& label);  // atoms, cavity

}  // namespace dickesim

#endif
