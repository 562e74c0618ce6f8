#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include "dickesim/analysis.hpp"
#include "dickesim/analytic.hpp"
#include "dickesim/trajectory.hpp"
#include "testutil.hpp"

using namespace dickesim;
using cplx = std::complex<double>;

namespace {

SystemParams reference_params(int n = 3) {
    SystemParams p;
    p.g_L = p.g_R = 1.0;
    p.kappa_L = p.kappa_R = 1.4 / 16.0;
    p.delta_L = 20.0;
    p.n_atoms = n;
    p.delta_R = optimal_detuning(p, 0);
    return p;
}

double binom(int n, int k) {
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                               std::lgamma(n - k + 1.0)));
}

}  // namespace

TEST_CASE("Dicke state amplitudes") {
    StateVector w2 = dicke_state(2, 1);
    REQUIRE(w2.basis->dim() == 2);
    CHECK(w2.basis->label(0) == "01|vac");
    CHECK(w2.basis->label(1) == "10|vac");
    CHECK(std::abs(w2.amplitudes(0) - 1.0 / std::sqrt(2.0)) < 1e-15);

    StateVector w3 = dicke_state(3, 1);
    REQUIRE(w3.basis->dim() == 3);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(w3.amplitudes(i) - 1.0 / std::sqrt(3.0)) < 1e-15);

    StateVector top = dicke_state(3, 3);
    REQUIRE(top.basis->dim() == 1);
    CHECK(top.basis->label(0) == "111|vac");
    CHECK(std::abs(top.amplitudes(0) - 1.0) < 1e-15);

    CHECK_THROWS_AS(dicke_state(3, 4), std::invalid_argument);
    CHECK_THROWS_AS(dicke_state(3, -1), std::invalid_argument);
}

TEST_CASE("collective-operator construction agrees with enumeration") {
    for (int n = 1; n <= 4; ++n)
        for (int m = 0; m <= n; ++m) {
            StateVector a = dicke_state(n, m);
            StateVector b = dicke_state_collective(n, m);
            CHECK(std::abs(b.norm_sq() - 1.0) < 1e-12);
            CHECK(fidelity(a, b) == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("Dicke states are permutation symmetric") {
    StateVector psi = dicke_state(4, 2);
    // swap atoms 1 and 3 in every label: the amplitude map is unchanged
    std::map<std::string, cplx> original, permuted;
    for (int i = 0; i < psi.basis->dim(); ++i) {
        std::string label = psi.basis->label(i);
        original[label] = psi.amplitudes(i);
        std::swap(label[0], label[2]);
        permuted[label] = psi.amplitudes(i);
    }
    CHECK(original == permuted);
}

TEST_CASE("fidelity") {
    StateVector psi = dicke_state(3, 1);
    CHECK(fidelity(psi, psi) == doctest::Approx(1.0).epsilon(1e-14));

    auto basis = build_basis(ReducedSymmetric{3});
    CHECK(fidelity(basis_state(basis, 0), basis_state(basis, 1)) == 0.0);

    // global phase is irrelevant
    StateVector rotated = psi;
    rotated.amplitudes *= std::exp(cplx(0.0, 0.7));
    CHECK(fidelity(psi, rotated) == doctest::Approx(1.0).epsilon(1e-14));

    // string-labelled bases with different supports match label by label
    CHECK(fidelity(dicke_state(3, 1), dicke_state(3, 2)) == 0.0);

    CHECK_THROWS_AS(fidelity(basis_state(basis, 0), psi), std::invalid_argument);
    StateVector unnormalized{basis, Eigen::Vector3cd(0.5, 0.0, 0.0)};
    CHECK_THROWS_AS(fidelity(unnormalized, basis_state(basis, 0)), std::invalid_argument);
}

TEST_CASE("ladder algebra by enumeration") {
    // collective raising sum_j |1><0|_j sends |n,m> to sqrt((n-m)(m+1)) |n,m+1>
    for (int n = 1; n <= 4; ++n)
        for (int m = 0; m < n; ++m) {
            StateVector from = dicke_state(n, m);
            std::map<std::string, cplx> raised;
            for (int i = 0; i < from.basis->dim(); ++i) {
                auto [atoms, cav] = split_label(from.basis->label(i));
                for (int j = 0; j < n; ++j)
                    if (atoms[static_cast<std::size_t>(j)] == '0') {
                        std::string t = atoms;
                        t[static_cast<std::size_t>(j)] = '1';
                        raised[t + "|" + cav] += from.amplitudes(i);
                    }
            }
            StateVector to = dicke_state(n, m + 1);
            cplx overlap = 0.0;
            for (int i = 0; i < to.basis->dim(); ++i) {
                auto it = raised.find(to.basis->label(i));
                if (it != raised.end()) overlap += std::conj(to.amplitudes(i)) * it->second;
            }
            double expected = std::sqrt(static_cast<double>((n - m) * (m + 1)));
            CHECK(std::abs(overlap - expected) < 1e-12);
        }
}

TEST_CASE("expand_label") {
    auto phi1 = expand_label(ReducedSymmetric{3}, "phi1");
    REQUIRE(phi1.size() == 3);
    for (const auto& [label, amp] : phi1) {
        auto [atoms, cav] = split_label(label);
        CHECK(cav == "R");
        CHECK(std::count(atoms.begin(), atoms.end(), '1') == 1);
        CHECK(std::abs(amp - 1.0 / std::sqrt(3.0)) < 1e-15);
    }

    auto phi2 = expand_label(ReducedSymmetric{3}, "phi2");
    REQUIRE(phi2.size() == 3);
    for (const auto& [label, amp] : phi2)
        CHECK(split_label(label).second == "vac");

    auto ladder_mid = expand_label(SymmetricLadder{3, 1}, "sym(3,1;e)|vac");
    REQUIRE(ladder_mid.size() == 6);  // 3 positions for the 1, 2 for the e
    for (const auto& [label, amp] : ladder_mid)
        CHECK(std::abs(amp - 1.0 / std::sqrt(6.0)) < 1e-15);

    CHECK_THROWS_AS(expand_label(ReducedSymmetric{3}, "phi7"), std::invalid_argument);
    CHECK_THROWS_AS(expand_label(AtomicStrings{3}, "000|vac"), std::invalid_argument);
}

TEST_CASE("oracle certification of the reduced bases") {
    IntegratorControls tight;
    tight.rtol = 1e-12;
    tight.atol = 1e-14;
    std::vector<double> grid = {10.0, 40.0, 114.0};

    SystemParams p = reference_params(3);
    CHECK(oracle_compare(p, ReducedSymmetric{3}, grid, tight).max_deviation < 1e-9);

    SystemParams step = reference_params(3);
    step.delta_R = optimal_detuning(step, 1);
    auto ladder = oracle_compare(step, SymmetricLadder{3, 1}, grid, tight);
    CHECK(ladder.max_deviation < 1e-9);
    CHECK(ladder.full_dimension == 3 + 6 + 3);

    // n = 1: the reduced and full spaces coincide
    SystemParams tiny = reference_params(1);
    auto report = oracle_compare(tiny, ReducedSymmetric{1}, grid, tight);
    CHECK(report.full_dimension == 3);
    CHECK(report.max_deviation < 1e-9);

    CHECK_THROWS_AS(oracle_compare(p, ReducedSymmetric{3}, {}, tight), std::invalid_argument);
}

TEST_CASE("inhomogeneous couplings reduce the heralded fidelity") {
    int n = 3;
    SystemParams p = reference_params(n);
    CouplingProfile prof;
    prof.g0 = 1.0;
    prof.w0 = 1.0;
    prof.wave_number = 1.0;
    double z_full = std::asin(1.0);
    double z_weak = std::asin(0.9);
    prof.positions = {{0.0, 0.0, z_full}, {0.0, 0.0, z_full}, {0.0, 0.0, z_weak}};

    auto basis = build_basis(SingleExcitation{n});
    auto H = build_hamiltonian(p, basis, prof);
    TrialSampler sampler(H, basis_state(basis, 0), detection_horizon(p));
    StateVector target = dicke_state(n, 1);

    // the heralded state depends on the click time here (a second collective
    // mode mixes in), so bound each click loosely and the average tightly
    int d1 = 0;
    double total = 0.0;
    for (std::uint64_t i = 0; i < 400 && d1 < 50; ++i) {
        TrialRng rng(77, i);
        TrialOutcome outcome = sampler.sample(rng);
        if (outcome.terminal != Terminal::D1Click) continue;
        ++d1;
        double f = fidelity(outcome.post_state, target);
        CHECK(f > 0.5);
        CHECK(f < 1.0 - 1e-3);  // measurably below the uniform case
        total += f;
    }
    CHECK(d1 >= 20);
    CHECK(total / d1 > 0.95);
}

TEST_CASE("binomial support sizes") {
    for (int n = 1; n <= 4; ++n)
        for (int m = 0; m <= n; ++m)
            CHECK(dicke_state(n, m).basis->dim() == static_cast<int>(binom(n, m)));
}
