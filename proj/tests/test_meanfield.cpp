#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "jch/errors.hpp"
#include "jch/meanfield.hpp"

using namespace jch;

namespace {

ModelParams resonant_sf() {
    ModelParams p;
    p.mu = 0.3;  // F1 = -0.3
    p.z = 4;
    p.kappa = 0.04;  // zkappa = 0.16
    return p;
}

std::vector<double> real_spectrum(const ComplexMatrix& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.real());
    std::vector<double> w(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
    return w;
}

} // namespace

TEST_CASE("basis ordering and dimensions") {
    const auto b1 = build_basis(1);
    CHECK(b1.dimension() == 4);
    const auto states = b1.states();
    CHECK(states[0] == BasisState{AtomLevel::g, 0});
    CHECK(states[1] == BasisState{AtomLevel::e, 0});
    CHECK(states[2] == BasisState{AtomLevel::g, 1});
    CHECK(states[3] == BasisState{AtomLevel::e, 1});

    CHECK(build_basis(5).dimension() == 12);

    const auto b20 = build_basis(20);
    CHECK(b20.dimension() == 42);
    CHECK(b20.index(AtomLevel::e, 20) == 41);

    CHECK_THROWS_AS(build_basis(0), std::invalid_argument);
}

TEST_CASE("lossless hamiltonians are hermitian") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const auto basis = build_basis(6);
    for (int trial = 0; trial < 25; ++trial) {
        ModelParams p;
        p.omega_a = 0.8 + 0.4 * uni(rng);
        p.omega_c = 0.8 + 0.4 * uni(rng);
        p.beta = 0.2 + uni(rng);
        p.mu = uni(rng);
        p.kappa = 0.2 * uni(rng);
        const ComplexMatrix h = build_mf_hamiltonian(p, 0.1 + uni(rng), basis);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

        const auto w = real_spectrum(h);  // all eigenvalues real for a real
                                          // symmetric matrix by construction
        Eigen::ComplexEigenSolver<ComplexMatrix> solver(h);
        for (int i = 0; i < solver.eigenvalues().size(); ++i)
            CHECK(std::abs(solver.eigenvalues()(i).imag()) < 1e-10);
        CHECK(w.size() == static_cast<std::size_t>(basis.dimension()));
    }
}

TEST_CASE("psi = 0 conserves the excitation number") {
    ModelParams p = resonant_sf();
    p.gamma_c = 0.02;
    const auto basis = build_basis(4);
    const ComplexMatrix h = build_mf_hamiltonian(p, 0.0, basis);
    for (int i = 0; i < basis.dimension(); ++i)
        for (int j = 0; j < basis.dimension(); ++j)
            if (basis.excitations(i) != basis.excitations(j))
                CHECK(std::abs(h(i, j)) == 0.0);
}

TEST_CASE("single-excitation block diagonalizes to 1 +- 1") {
    ModelParams p;
    p.mu = 0.0;
    p.kappa = 0.0;
    const auto w = real_spectrum(build_mf_hamiltonian(p, 0.0, build_basis(1)));
    // basis n_max=1: {0, 1-1, 1+1, 2} = {0, 0, 2, 2}
    REQUIRE(w.size() == 4);
    CHECK(w[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(w[2] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(w[3] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("ground state picks the minimal real part") {
    ComplexMatrix diag = ComplexMatrix::Zero(3, 3);
    diag(0, 0) = 3.0;
    diag(1, 1) = 1.0;
    diag(2, 2) = 2.0;
    auto gs = ground_state(diag);
    CHECK(gs.energy == std::complex<double>(1.0, 0.0));
    CHECK(std::abs(gs.state(1)) == doctest::Approx(1.0));

    ComplexMatrix lossy = ComplexMatrix::Zero(2, 2);
    lossy(0, 0) = {1.0, -0.2};
    lossy(1, 1) = {1.5, -0.01};
    gs = ground_state(lossy);
    CHECK(gs.energy == std::complex<double>(1.0, -0.2));
    CHECK(std::abs(gs.state(0)) == doctest::Approx(1.0));
    CHECK_FALSE(gs.near_degenerate);

    ComplexMatrix tight = ComplexMatrix::Zero(2, 2);
    tight(0, 0) = 1.0;
    tight(1, 1) = 1.0 + 1e-12;
    CHECK(ground_state(tight).near_degenerate);

    CHECK_THROWS_AS(ground_state(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("ground state of the undriven site is the lower polariton") {
    // mu = omega_c - 0.7 beta: grand-canonical levels 0, -0.3, -0.0142...
    ModelParams p;
    p.mu = 0.3;
    p.kappa = 0.0;
    const auto basis = build_basis(6);
    const auto gs = ground_state(build_mf_hamiltonian(p, 0.0, basis));
    CHECK(gs.energy.real() == doctest::Approx(-0.3).epsilon(1e-12));
    CHECK(gs.energy.imag() == doctest::Approx(0.0));
    // |-,1> = (|g,1> - |e,0>)/sqrt(2), phase fixed on the largest component
    CHECK(std::abs(gs.state(basis.index(AtomLevel::g, 1))) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(std::abs(gs.state(basis.index(AtomLevel::e, 0))) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("undriven lossless spectrum reproduces the dressed levels minus mu n") {
    ModelParams p;
    p.mu = 0.23;
    p.kappa = 0.0;
    const int n_max = 7;
    const auto basis = build_basis(n_max);
    auto w = real_spectrum(build_mf_hamiltonian(p, 0.0, basis));

    std::vector<double> expected{0.0};
    for (int n = 1; n <= n_max; ++n) {
        expected.push_back(dressed_energy(p, n, Branch::minus) - p.mu * n);
        expected.push_back(dressed_energy(p, n, Branch::plus) - p.mu * n);
    }
    // truncation artifact: |e, n_max> has no |g, n_max+1> partner
    expected.push_back(p.omega_a + n_max * p.omega_c - p.mu * (n_max + 1));
    std::sort(expected.begin(), expected.end());

    REQUIRE(w.size() == expected.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        CHECK(w[i] == doctest::Approx(expected[i]).epsilon(1e-10));
}

TEST_CASE("site observables") {
    const auto basis = build_basis(3);
    ComplexVector state = ComplexVector::Zero(basis.dimension());

    SUBCASE("lower polariton") {
        state(basis.index(AtomLevel::g, 1)) = 1.0 / std::sqrt(2.0);
        state(basis.index(AtomLevel::e, 0)) = -1.0 / std::sqrt(2.0);
        const auto obs = site_observables(state, basis);
        CHECK(obs.mean_n == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(obs.var_n == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(obs.mean_photons == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("vacuum") {
        state(basis.index(AtomLevel::g, 0)) = 1.0;
        const auto obs = site_observables(state, basis);
        CHECK(obs.mean_n == 0.0);
        CHECK(obs.var_n == 0.0);
        CHECK(obs.mean_photons == 0.0);
    }

    SUBCASE("photon superposition") {
        state(basis.index(AtomLevel::g, 0)) = 1.0 / std::sqrt(2.0);
        state(basis.index(AtomLevel::g, 1)) = 1.0 / std::sqrt(2.0);
        const auto obs = site_observables(state, basis);
        CHECK(obs.mean_n == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(obs.var_n == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(obs.mean_photons == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("rejects unnormalized states") {
        state(0) = 0.7;
        CHECK_THROWS_AS(site_observables(state, basis), std::invalid_argument);
    }
}

TEST_CASE("fixed point stays Mott below the boundary") {
    ModelParams p = resonant_sf();
    p.kappa = 0.025;  // zkappa = 0.10 < 0.1478
    const auto sol = order_parameter_fixed_point(p, build_basis(8), 0.0);
    CHECK(sol.converged);
    CHECK(sol.psi < 1e-8);
    CHECK(sol.psi >= 0.0);
}

TEST_CASE("fixed point lands near the perturbative value in the SF region") {
    const auto sol = order_parameter_fixed_point(resonant_sf(), build_basis(8), 0.0);
    CHECK(sol.converged);
    CHECK(sol.psi == doctest::Approx(0.371).epsilon(0.15));
    CHECK(sol.psi == doctest::Approx(0.37003225930291).epsilon(1e-8));
    CHECK(sol.psi_gamma < 1e-9);  // lossless
    CHECK(sol.residual < 1e-10);
}

TEST_CASE("zero hopping fixes psi = 0 within two iterations") {
    ModelParams p = resonant_sf();
    p.kappa = 0.0;
    p.gamma_c = 0.03;
    const auto sol = order_parameter_fixed_point(p, build_basis(6), 0.0);
    CHECK(sol.converged);
    CHECK(sol.iterations <= 2);
    CHECK(sol.psi < 1e-12);
}

TEST_CASE("deep SF converges through damped oscillation") {
    ModelParams p = resonant_sf();
    p.kappa = 0.075;  // zkappa = 0.3
    const auto sol = order_parameter_fixed_point(p, build_basis(8), 0.0);
    CHECK(sol.converged);
    CHECK(sol.psi > 0.5);
}

TEST_CASE("psi_gamma shrinks linearly with gamma") {
    ModelParams p = resonant_sf();
    p.kappa = 0.05;  // zkappa = 0.2
    const auto basis = build_basis(8);

    p.gamma_c = 0.02;
    const auto two = order_parameter_fixed_point(p, basis, 0.0);
    p.gamma_c = 0.01;
    const auto one = order_parameter_fixed_point(p, basis, 0.0);

    CHECK(two.converged);
    CHECK(one.converged);
    CHECK(one.psi_gamma > 0.0);
    CHECK(two.psi_gamma / one.psi_gamma == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("truncation is converged at n_max = 8") {
    ModelParams p = resonant_sf();
    CHECK(truncation_residual(p, 8, 0.0) < 1e-4);
    p.kappa = 0.05;
    p.gamma_c = 0.02;
    CHECK(truncation_residual(p, 8, 0.0) < 1e-4);
}

TEST_CASE("time enters the solver as coupling erosion") {
    ModelParams p = resonant_sf();
    p.kappa = 0.05;
    p.gamma_c = 0.05;
    const auto basis = build_basis(8);
    const double t = 0.7;

    // solving at time t equals solving at t=0 with kappa e^{-2 gamma t}
    ModelParams eroded = p;
    eroded.kappa *= std::exp(-2.0 * p.total_gamma() * t);
    const auto direct = order_parameter_fixed_point(p, basis, t);
    const auto shifted = order_parameter_fixed_point(eroded, basis, 0.0);
    CHECK(direct.psi == doctest::Approx(shifted.psi).epsilon(1e-9));
}
