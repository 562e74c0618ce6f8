#include "dickesim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace dickesim {

namespace {

using cplx = std::complex<double>;

bool string_labelled(const IndexedBasis& basis) {
    for (const auto& l : basis.labels())
        if (l.find('|') == std::string::npos) return false;
    return true;
}

// Strings with m ones and a single e (the symmetric one-excited sector of the
// ladder step m). Each arises from a unique (weight-(m+1) string, e-position).
std::vector<std::string> excited_strings(int n, int m) {
    std::vector<std::string> out;
    for (const auto& s : atomic_strings_of_weight(n, m + 1))
        for (int i = 0; i < n; ++i)
            if (s[static_cast<std::size_t>(i)] == '1') {
                std::string t = s;
                t[static_cast<std::size_t>(i)] = 'e';
                out.push_back(t);
            }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

StateVector dicke_state(int n, int m) {
    if (m < 0 || m > n) throw std::invalid_argument("dicke_state: need 0 <= m <= n");
    std::vector<std::string> labels;
    for (const auto& s : atomic_strings_of_weight(n, m)) labels.push_back(s + "|vac");
    auto basis = build_basis(AtomicStrings{n}, labels);
    StateVector psi{basis, Eigen::VectorXcd::Constant(basis->dim(),
                           1.0 / std::sqrt(static_cast<double>(basis->dim())))};
    return psi;
}

StateVector dicke_state(int n, int m, const BasisPtr& basis) {
    if (m < 0 || m > n) throw std::invalid_argument("dicke_state: need 0 <= m <= n");
    auto strings = atomic_strings_of_weight(n, m);
    double amp = 1.0 / std::sqrt(static_cast<double>(strings.size()));
    StateVector psi{basis, Eigen::VectorXcd::Zero(basis->dim())};
    for (const auto& s : strings) psi.amplitudes(basis->require_index(s + "|vac")) = amp;
    return psi;
}

StateVector dicke_state_collective(int n, int m) {
    if (m < 0 || m > n) throw std::invalid_argument("dicke_state_collective: need 0 <= m <= n");
    std::map<std::string, cplx> amps{{std::string(static_cast<std::size_t>(n), 'e'), 1.0}};
    auto apply_s = [n, &amps](char target) {
        std::map<std::string, cplx> next;
        for (const auto& [s, a] : amps)
            for (int i = 0; i < n; ++i)
                if (s[static_cast<std::size_t>(i)] == 'e') {
                    std::string t = s;
                    t[static_cast<std::size_t>(i)] = target;
                    next[t] += a;
                }
        amps = std::move(next);
    };
    for (int i = 0; i < n - m; ++i) apply_s('0');
    for (int i = 0; i < m; ++i) apply_s('1');

    double lognorm = std::lgamma(n + 1.0) + std::lgamma(m + 1.0) + std::lgamma(n - m + 1.0);
    double coeff = std::exp(-0.5 * lognorm);
    std::vector<std::string> labels;
    for (const auto& [s, a] : amps) labels.push_back(s + "|vac");
    auto basis = build_basis(AtomicStrings{n}, labels);
    StateVector psi{basis, Eigen::VectorXcd::Zero(basis->dim())};
    for (const auto& [s, a] : amps) psi.amplitudes(basis->require_index(s + "|vac")) = coeff * a;
    return psi;
}

double fidelity(const StateVector& psi, const StateVector& phi) {
    if (std::abs(psi.norm_sq() - 1.0) > 1e-6 || std::abs(phi.norm_sq() - 1.0) > 1e-6)
        throw std::invalid_argument("fidelity: states must be normalized");
    cplx overlap = 0.0;
    if (psi.basis->labels() == phi.basis->labels()) {
        overlap = phi.amplitudes.dot(psi.amplitudes);
    } else if (string_labelled(*psi.basis) && string_labelled(*phi.basis) &&
               psi.basis->n_atoms() == phi.basis->n_atoms()) {
        for (int i = 0; i < psi.basis->dim(); ++i) {
            int j = phi.basis->index_of(psi.basis->label(i));
            if (j >= 0) overlap += std::conj(phi.amplitudes(j)) * psi.amplitudes(i);
        }
    } else {
        throw std::invalid_argument("fidelity: basis mismatch");
    }
    return std::norm(overlap);
}

std::vector<std::pair<std::string, cplx>> expand_label(const BasisDescriptor& descriptor,
                                                       const std::string& label) {
    auto uniform = [](const std::vector<std::string>& strings, const std::string& cavity) {
        double amp = 1.0 / std::sqrt(static_cast<double>(strings.size()));
        std::vector<std::pair<std::string, cplx>> out;
        for (const auto& s : strings) out.emplace_back(s + "|" + cavity, amp);
        return out;
    };
    if (auto* red = std::get_if<ReducedSymmetric>(&descriptor)) {
        int n = red->n;
        if (label == "phi0") return {{std::string(static_cast<std::size_t>(n), '0') + "|L", 1.0}};
        if (label == "phi1") return uniform(atomic_strings_of_weight(n, 1), "R");
        if (label == "phi2") return uniform(excited_strings(n, 0), "vac");
        throw std::invalid_argument("expand_label: unknown reduced label " + label);
    }
    if (auto* lad = std::get_if<SymmetricLadder>(&descriptor)) {
        int n = lad->n, m = lad->m;
        auto basis = build_basis(descriptor);
        if (label == basis->label(0)) return uniform(atomic_strings_of_weight(n, m), "L");
        if (label == basis->label(1)) return uniform(excited_strings(n, m), "vac");
        if (label == basis->label(2)) return uniform(atomic_strings_of_weight(n, m + 1), "R");
        throw std::invalid_argument("expand_label: unknown ladder label " + label);
    }
    // SingleExcitation labels are already FullTensor labels.
    if (std::holds_alternative<SingleExcitation>(descriptor)) return {{label, 1.0}};
    throw std::invalid_argument("expand_label: descriptor has no symmetric expansion");
}

OracleReport oracle_compare(const SystemParams& params, const BasisDescriptor& reduced,
                            const std::vector<double>& t_grid, const IntegratorControls& controls) {
    if (t_grid.empty()) throw std::invalid_argument("oracle_compare: empty time grid");
    double t_end = *std::max_element(t_grid.begin(), t_grid.end());

    auto reduced_basis = build_basis(reduced);
    auto reduced_h = build_hamiltonian(params, reduced_basis);

    // Full basis: BFS closure from the expansion of every reduced basis state.
    std::vector<std::string> seeds;
    for (const auto& label : reduced_basis->labels())
        for (const auto& [full_label, amp] : expand_label(reduced, label))
            seeds.push_back(full_label);
    auto full_basis = build_basis(FullTensor{params.n_atoms}, seeds);
    auto full_h = build_hamiltonian(params, full_basis);

    // Projection rows <reduced_i| in the full basis.
    Eigen::MatrixXcd projector = Eigen::MatrixXcd::Zero(reduced_basis->dim(), full_basis->dim());
    for (int i = 0; i < reduced_basis->dim(); ++i)
        for (const auto& [full_label, amp] : expand_label(reduced, reduced_basis->label(i)))
            projector(i, full_basis->require_index(full_label)) = std::conj(amp);

    StateVector psi0_red = basis_state(reduced_basis, 0);
    StateVector psi0_full{full_basis, projector.row(0).adjoint()};

    auto red_evo = integrate_conditional(reduced_h, psi0_red, t_end, controls);
    auto full_evo = integrate_conditional(full_h, psi0_full, t_end, controls);

    OracleReport report;
    report.full_dimension = full_basis->dim();
    for (double t : t_grid) {
        Eigen::VectorXcd projected = projector * full_evo.state_at(t).amplitudes;
        Eigen::VectorXcd diff = projected - red_evo.state_at(t).amplitudes;
        report.max_deviation = std::max(report.max_deviation, diff.cwiseAbs().maxCoeff());
    }
    return report;
}

}  // namespace dickesim
