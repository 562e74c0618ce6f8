#include "dickesim/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace dickesim {

namespace {

using cplx = std::complex<double>;

// Collapsed components of the symmetric m-excitation atomic state: every
// weight-m string with amplitude 1/sqrt(C(n,m)).
std::vector<std::pair<std::string, cplx>> symmetric_targets(int n, int m) {
    auto strings = atomic_strings_of_weight(n, m);
    double amp = 1.0 / std::sqrt(static_cast<double>(strings.size()));
    std::vector<std::pair<std::string, cplx>> out;
    out.reserve(strings.size());
    for (auto& s : strings) out.emplace_back(s + "|vac", amp);
    return out;
}

JumpChannel make_channel(std::string name, std::optional<int> detector, double rate, int dim) {
    JumpChannel ch;
    ch.name = std::move(name);
    ch.detector = detector;
    ch.rate = rate;
    ch.occupation = Eigen::VectorXd::Zero(dim);
    return ch;
}

void resolve_couplings(const SystemParams& params, const std::optional<CouplingProfile>& profile,
                       std::vector<double>& gl, std::vector<double>& gr) {
    int n = params.n_atoms;
    gl.assign(static_cast<std::size_t>(n), params.g_L);
    gr.assign(static_cast<std::size_t>(n), params.g_R);
    if (profile) {
        if (static_cast<int>(profile->positions.size()) != n)
            throw std::invalid_argument("build_hamiltonian: profile positions != n_atoms");
        for (int i = 0; i < n; ++i) {
            double gi = mode_coupling(*profile, static_cast<std::size_t>(i));
            gl[static_cast<std::size_t>(i)] = gi;
            gr[static_cast<std::size_t>(i)] = gi * (params.g_L != 0.0 ? params.g_R / params.g_L : 1.0);
        }
    }
}

}  // namespace

double EffectiveHamiltonian::loss_density(const Eigen::VectorXcd& amplitudes) const {
    double total = 0.0;
    for (const auto& ch : channels) {
        double occ = 0.0;
        for (int i = 0; i < dim(); ++i) occ += ch.occupation(i) * std::norm(amplitudes(i));
        total += ch.rate * occ;
    }
    return total;
}

EffectiveHamiltonian build_hamiltonian(const SystemParams& params, const BasisPtr& basis,
                                       const std::optional<CouplingProfile>& profile) {
    params.validate();
    const int n = params.n_atoms;
    if (basis->n_atoms() != n)
        throw std::invalid_argument("build_hamiltonian: basis atom count != params.n_atoms");

    const int dim = basis->dim();
    const cplx diag_L(-params.delta_L, -0.5 * params.kappa_L);
    const cplx diag_R(-params.delta_R, -0.5 * params.kappa_R);

    EffectiveHamiltonian H;
    H.basis = basis;
    H.rotating_shift = params.delta_L;
    H.hermitian_part = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::VectorXd n_L = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd n_R = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd n_e = Eigen::VectorXd::Zero(dim);

    auto ch_L = make_channel("a_L", 0, params.kappa_L, dim);
    auto ch_R = make_channel("a_R", 1, params.kappa_R, dim);
    ch_L.action.resize(static_cast<std::size_t>(dim));
    ch_R.action.resize(static_cast<std::size_t>(dim));

    const auto& desc = basis->descriptor();
    if (std::holds_alternative<ReducedSymmetric>(desc) || std::holds_alternative<SymmetricLadder>(desc)) {
        if (profile)
            throw std::invalid_argument("build_hamiltonian: coupling profile requires "
                                        "SingleExcitation or FullTensor basis");
        int m = 0;
        // Label order differs: {phi0 = L, phi1 = R, phi2 = excited} in the
        // reduced basis, {L, excited, R} on a ladder step.
        int iR = 1, ie = 2;
        if (auto* lad = std::get_if<SymmetricLadder>(&desc)) {
            m = lad->m;
            ie = 1;
            iR = 2;
        }
        // Collective matrix elements for the m -> m+1 step; m = 0 recovers the
        // sqrt(n) g_L, g_R coefficients of the W-state step.
        double cl = std::sqrt(static_cast<double>(n - m)) * params.g_L;
        double cr = std::sqrt(static_cast<double>(m + 1)) * params.g_R;
        H.hermitian_part(0, ie) = cl;
        H.hermitian_part(ie, 0) = cl;
        H.hermitian_part(iR, ie) = cr;
        H.hermitian_part(ie, iR) = cr;
        H.hermitian_part(0, 0) = -params.delta_L;
        H.hermitian_part(iR, iR) = -params.delta_R;
        n_L(0) = 1.0;
        n_R(iR) = 1.0;
        n_e(ie) = 1.0;
        ch_L.action[0] = symmetric_targets(n, m);
        ch_R.action[static_cast<std::size_t>(iR)] = symmetric_targets(n, m + 1);
    } else if (std::holds_alternative<SingleExcitation>(desc)) {
        std::vector<double> gl, gr;
        resolve_couplings(params, profile, gl, gr);
        // index map: 0 = |0..0>|L>, 1..n = |e_i>|vac>, n+1..2n = |1_i>|R>
        for (int i = 0; i < n; ++i) {
            int ie = 1 + i;
            int i1 = 1 + n + i;
            H.hermitian_part(0, ie) = gl[static_cast<std::size_t>(i)];
            H.hermitian_part(ie, 0) = gl[static_cast<std::size_t>(i)];
            H.hermitian_part(ie, i1) = gr[static_cast<std::size_t>(i)];
            H.hermitian_part(i1, ie) = gr[static_cast<std::size_t>(i)];
            n_e(ie) = 1.0;
            n_R(i1) = 1.0;
            H.hermitian_part(i1, i1) = -params.delta_R;
            auto [atoms, cav] = split_label(basis->label(i1));
            ch_R.action[static_cast<std::size_t>(i1)] = {{atoms + "|vac", 1.0}};
        }
        H.hermitian_part(0, 0) = -params.delta_L;
        n_L(0) = 1.0;
        ch_L.action[0] = {{std::string(static_cast<std::size_t>(n), '0') + "|vac", 1.0}};
    } else if (std::holds_alternative<FullTensor>(desc)) {
        std::vector<double> gl, gr;
        resolve_couplings(params, profile, gl, gr);
        for (int idx = 0; idx < dim; ++idx) {
            auto [atoms, cav] = split_label(basis->label(idx));
            auto [nl, nr] = parse_cavity_token(cav);
            n_L(idx) = nl;
            n_R(idx) = nr;
            H.hermitian_part(idx, idx) = -params.delta_L * nl - params.delta_R * nr;
            if (nl == 1)
                ch_L.action[static_cast<std::size_t>(idx)] = {{atoms + "|" + cavity_token(0, nr), 1.0}};
            if (nr == 1)
                ch_R.action[static_cast<std::size_t>(idx)] = {{atoms + "|" + cavity_token(nl, 0), 1.0}};
            for (int i = 0; i < n; ++i) {
                char c = atoms[static_cast<std::size_t>(i)];
                if (c == 'e') n_e(idx) += 1.0;
                std::string a = atoms;
                // lower-triangular assembly: add <e_i, photon removed| H |idx>
                if (c == '0' && nl == 1) {
                    a[static_cast<std::size_t>(i)] = 'e';
                    int j = basis->index_of(a + "|" + cavity_token(0, nr));
                    if (j >= 0) {
                        H.hermitian_part(j, idx) = gl[static_cast<std::size_t>(i)];
                        H.hermitian_part(idx, j) = gl[static_cast<std::size_t>(i)];
                    }
                } else if (c == '1' && nr == 1) {
                    a[static_cast<std::size_t>(i)] = 'e';
                    int j = basis->index_of(a + "|" + cavity_token(nl, 0));
                    if (j >= 0) {
                        H.hermitian_part(j, idx) = gr[static_cast<std::size_t>(i)];
                        H.hermitian_part(idx, j) = gr[static_cast<std::size_t>(i)];
                    }
                }
            }
        }
    } else {
        throw std::invalid_argument("build_hamiltonian: AtomicStrings is a collapsed basis, "
                                    "not an evolution basis");
    }

    ch_L.occupation = n_L;
    ch_R.occupation = n_R;
    H.channels.push_back(std::move(ch_L));
    H.channels.push_back(std::move(ch_R));
    if (params.gamma_s > 0.0) {
        auto ch_s = make_channel("gamma_s", std::nullopt, params.gamma_s, dim);
        ch_s.occupation = n_e;
        H.channels.push_back(std::move(ch_s));
    }

    H.matrix = H.hermitian_part;
    for (const auto& ch : H.channels)
        for (int i = 0; i < dim; ++i)
            H.matrix(i, i) -= cplx(0.0, 0.5 * ch.rate * ch.occupation(i));
    return H;
}

double optimal_detuning(const SystemParams& params, int ladder_step) {
    if (params.delta_L == 0.0)
        throw std::invalid_argument("optimal_detuning: delta_L must be nonzero");
    if (ladder_step < 0 || ladder_step >= params.n_atoms)
        throw std::invalid_argument("optimal_detuning: ladder step out of range");
    double kl = static_cast<double>(params.n_atoms - ladder_step);
    double kr = static_cast<double>(ladder_step + 1);
    return params.delta_L - (kr * params.g_R * params.g_R - kl * params.g_L * params.g_L) / params.delta_L;
}

}  // namespace dickesim
