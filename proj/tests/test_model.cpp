#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "dickesim/analysis.hpp"
#include "dickesim/hamiltonian.hpp"
#include "testutil.hpp"

using namespace dickesim;

namespace {

SystemParams base_params(int n, double g = 1.0) {
    SystemParams p;
    p.g_L = p.g_R = g;
    p.kappa_L = p.kappa_R = 1.4 / 16.0 * g;
    p.delta_L = 20.0 * g;
    p.delta_R = 20.1 * g;
    p.n_atoms = n;
    return p;
}

int excitation_number(const std::string& label) {
    auto [atoms, cav] = split_label(label);
    auto [nl, nr] = parse_cavity_token(cav);
    int ne = static_cast<int>(std::count(atoms.begin(), atoms.end(), 'e'));
    return ne + nl + nr;
}

// <reduced_i| rows in the full basis, from expand_label.
Eigen::MatrixXcd projector(const BasisDescriptor& reduced, const BasisPtr& reduced_basis,
                           const BasisPtr& full_basis) {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(reduced_basis->dim(), full_basis->dim());
    for (int i = 0; i < reduced_basis->dim(); ++i)
        for (const auto& [label, amp] : expand_label(reduced, reduced_basis->label(i)))
            p(i, full_basis->require_index(label)) = std::conj(amp);
    return p;
}

}  // namespace

TEST_CASE("parameter validation") {
    SystemParams p = base_params(3);
    CHECK(p.validate().empty());
    CHECK(p.strongly_detuned());

    p.delta_L = 5.0;  // weak detuning warns, does not reject
    CHECK_FALSE(p.strongly_detuned());
    CHECK(p.validate().size() == 1);

    p = base_params(3);
    p.g_L = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = base_params(0);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = base_params(3);
    p.detector_efficiency = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("mode coupling profile") {
    CouplingProfile prof;
    prof.g0 = 2.0;
    prof.w0 = 1e-6;
    prof.wave_number = 2.0 * M_PI / 780e-9;
    double z_peak = 0.25 * 780e-9;  // sin(kz) = 1
    prof.positions = {{0.0, 0.0, z_peak}, {0.0, 0.0, 0.0}, {prof.w0, 0.0, z_peak}};

    CHECK(mode_coupling(prof, 0) == doctest::Approx(prof.g0).epsilon(1e-12));
    CHECK(mode_coupling(prof, 1) == doctest::Approx(0.0));
    CHECK(mode_coupling(prof, 2) == doctest::Approx(prof.g0 * std::exp(-1.0)).epsilon(1e-12));
    for (std::size_t i = 0; i < prof.positions.size(); ++i) {
        CHECK(mode_coupling(prof, i) >= 0.0);
        CHECK(mode_coupling(prof, i) <= prof.g0);
    }
    CHECK_THROWS_AS(mode_coupling(prof, 3), std::out_of_range);
}

TEST_CASE("basis dimensions and orderings") {
    CHECK(build_basis(ReducedSymmetric{5})->dim() == 3);
    CHECK(build_basis(SingleExcitation{3})->dim() == 7);
    CHECK(build_basis(SymmetricLadder{4, 2})->dim() == 3);

    auto full = build_basis(FullTensor{2}, {"00|L"});
    REQUIRE(full->dim() == 5);
    // lexicographic over (atomic string, n_L, n_R), restricted to the closure
    CHECK(full->label(0) == "00|L");
    CHECK(full->label(1) == "01|R");
    CHECK(full->label(2) == "0e|vac");
    CHECK(full->label(3) == "10|R");
    CHECK(full->label(4) == "e0|vac");

    auto single = build_basis(SingleExcitation{3});
    CHECK(single->label(0) == "000|L");
    CHECK(single->label(1) == "e00|vac");
    CHECK(single->label(3) == "00e|vac");
    CHECK(single->label(4) == "100|R");

    CHECK_THROWS_AS(build_basis(ReducedSymmetric{0}), std::invalid_argument);
    CHECK_THROWS_AS(build_basis(FullTensor{5}, {"00000|L"}), std::invalid_argument);
}

TEST_CASE("reduced Hamiltonian matrix elements") {
    SystemParams p = base_params(3);
    auto H = build_hamiltonian(p, build_basis(ReducedSymmetric{3}));

    CHECK(H.hermitian_part(0, 2).real() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(H.hermitian_part(1, 2).real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(H.matrix(0, 0) == std::complex<double>(-p.delta_L, -0.5 * p.kappa_L));
    CHECK(H.matrix(1, 1) == std::complex<double>(-p.delta_R, -0.5 * p.kappa_R));
    CHECK(H.matrix(2, 2) == std::complex<double>(0.0, 0.0));
    CHECK(H.channels.size() == 2);  // no gamma_s channel by default

    p.gamma_s = 0.02;
    auto Hs = build_hamiltonian(p, build_basis(ReducedSymmetric{3}));
    CHECK(Hs.matrix(2, 2) == std::complex<double>(0.0, -0.5 * p.gamma_s));
    REQUIRE(Hs.channels.size() == 3);
    CHECK(Hs.channels[2].name == "gamma_s");
    CHECK_FALSE(Hs.channels[2].collapsible());
    CHECK_FALSE(Hs.channels[2].detector.has_value());
}

TEST_CASE("ladder Hamiltonian matrix elements") {
    SystemParams p = base_params(3);
    auto reduced = build_hamiltonian(p, build_basis(ReducedSymmetric{3}));
    auto step0 = build_hamiltonian(p, build_basis(SymmetricLadder{3, 0}));

    // same matrix up to the documented label orders: reduced puts the R state
    // at index 1, the ladder basis puts the excited state there
    Eigen::Matrix3cd perm = Eigen::Matrix3cd::Zero();
    perm(0, 0) = perm(1, 2) = perm(2, 1) = 1.0;
    CHECK((perm * step0.matrix * perm.transpose() - reduced.matrix).cwiseAbs().maxCoeff() < 1e-14);

    auto step1 = build_hamiltonian(p, build_basis(SymmetricLadder{3, 1}));
    CHECK(step1.hermitian_part(0, 1).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(step1.hermitian_part(2, 1).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("optimal detuning") {
    SystemParams p = base_params(1);
    CHECK(optimal_detuning(p, 0) == doctest::Approx(p.delta_L).epsilon(1e-14));

    p = base_params(3);
    CHECK(optimal_detuning(p, 0) == doctest::Approx(20.1).epsilon(1e-14));
    CHECK(optimal_detuning(p, 1) == doctest::Approx(p.delta_L).epsilon(1e-14));

    p.delta_L = 0.0;
    CHECK_THROWS_AS(optimal_detuning(p, 0), std::invalid_argument);
}

TEST_CASE("closed Hamiltonian is Hermitian") {
    SystemParams p = base_params(3);
    p.kappa_L = p.kappa_R = p.gamma_s = 0.0;
    std::vector<BasisPtr> bases = {
        build_basis(ReducedSymmetric{3}),
        build_basis(SingleExcitation{3}),
        build_basis(SymmetricLadder{3, 1}),
        build_basis(FullTensor{3}, {"000|L"}),
    };
    for (const auto& basis : bases) {
        auto H = build_hamiltonian(p, basis);
        double scale = H.matrix.cwiseAbs().maxCoeff();
        CHECK((H.matrix - H.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * scale);
    }
}

TEST_CASE("effective Hamiltonian decomposition") {
    SystemParams p = base_params(3);
    p.gamma_s = 0.03;
    auto H = build_hamiltonian(p, build_basis(FullTensor{3}, {"000|L"}));
    Eigen::MatrixXcd rebuilt = H.hermitian_part;
    for (const auto& ch : H.channels)
        for (int i = 0; i < H.dim(); ++i)
            rebuilt(i, i) -= std::complex<double>(0.0, 0.5 * ch.rate * ch.occupation(i));
    CHECK((rebuilt - H.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("FullTensor conserves excitation number") {
    SystemParams p = base_params(3);
    auto basis = build_basis(FullTensor{3}, {"000|L", "110|R"});
    auto H = build_hamiltonian(p, basis);
    for (int i = 0; i < basis->dim(); ++i)
        for (int j = 0; j < basis->dim(); ++j)
            if (excitation_number(basis->label(i)) != excitation_number(basis->label(j)))
                CHECK(std::abs(H.matrix(i, j)) == 0.0);
}

TEST_CASE("symmetric projection reproduces reduced matrices") {
    for (int n = 2; n <= 4; ++n) {
        SystemParams p = base_params(n);
        for (int m = 0; m < n; ++m) {
            BasisDescriptor desc = SymmetricLadder{n, m};
            auto rb = build_basis(desc);
            auto rh = build_hamiltonian(p, rb);
            std::vector<std::string> seeds;
            for (const auto& label : rb->labels())
                for (const auto& [fl, amp] : expand_label(desc, label)) seeds.push_back(fl);
            auto fb = build_basis(FullTensor{n}, seeds);
            auto fh = build_hamiltonian(p, fb);
            Eigen::MatrixXcd proj = projector(desc, rb, fb);
            Eigen::MatrixXcd projected = proj * fh.matrix * proj.adjoint();
            double scale = rh.matrix.cwiseAbs().maxCoeff();
            CHECK((projected - rh.matrix).cwiseAbs().maxCoeff() < 1e-12 * scale);
        }
    }
}

TEST_CASE("single-excitation basis block-diagonalizes at uniform coupling") {
    int n = 3;
    SystemParams p = base_params(n);
    auto sb = build_basis(SingleExcitation{n});
    auto sh = build_hamiltonian(p, sb);
    auto rh = build_hamiltonian(p, build_basis(ReducedSymmetric{n}));

    // symmetric rows: ground, uniform R combination, uniform excited combination
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(3, sb->dim());
    proj(0, 0) = 1.0;
    for (int i = 0; i < n; ++i) {
        proj(2, 1 + i) = 1.0 / std::sqrt(static_cast<double>(n));
        proj(1, 1 + n + i) = 1.0 / std::sqrt(static_cast<double>(n));
    }
    double scale = rh.matrix.cwiseAbs().maxCoeff();
    CHECK((proj * sh.matrix * proj.adjoint() - rh.matrix).cwiseAbs().maxCoeff() < 1e-12 * scale);

    // antisymmetric R combination decouples from the injected state
    Eigen::VectorXcd anti = Eigen::VectorXcd::Zero(sb->dim());
    anti(1 + n) = 1.0 / std::sqrt(2.0);
    anti(1 + n + 1) = -1.0 / std::sqrt(2.0);
    Eigen::VectorXcd image = sh.matrix * anti;
    CHECK(std::abs(image(0)) == 0.0);
}

TEST_CASE("coupling profile requires a per-atom basis") {
    SystemParams p = base_params(2);
    CouplingProfile prof;
    prof.g0 = 1.0;
    prof.w0 = 1.0;
    prof.wave_number = M_PI / 2.0;
    prof.positions = {{0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}};
    CHECK_THROWS_AS(build_hamiltonian(p, build_basis(ReducedSymmetric{2}), prof),
                    std::invalid_argument);
    CHECK_NOTHROW(build_hamiltonian(p, build_basis(SingleExcitation{2}), prof));
}
