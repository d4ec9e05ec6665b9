#include "jch/perturbation.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "jch/errors.hpp"
#include "jch/meanfield.hpp"

namespace jch {

namespace {

const double kWeightPlus = 3.0 + 2.0 * std::sqrt(2.0);

void require_resonant(const ModelParams& params, const char* where) {
    if (!is_resonant(params))
        throw off_resonance_error(std::string(where) +
                                  ": closed form requires delta = 0");
}

double lobe_sum(const ModelParams& params) {
    const double gamma = params.total_gamma();
    const double f1 = params.omega_c - params.beta - params.mu;
    const double f2 = -params.omega_c + (std::sqrt(2.0) - 1.0) * params.beta + params.mu;
    return f1 / (2.0 * f1 * f1 + 2.0 * gamma * gamma) +
           kWeightPlus * f2 / (4.0 * f2 * f2 + 4.0 * gamma * gamma);
}

} // namespace

ResonantCoefficients resonant_coefficients(const ModelParams& params, double t) {
    require_resonant(params, "resonant_coefficients");
    if (t < 0.0) throw std::invalid_argument("time must be non-negative");
    if (params.zkappa() == 0.0)
        throw zero_hopping_error(
            "resonant_coefficients: chi diverges at zkappa = 0; Mott for all couplings");

    const double gamma = params.total_gamma();
    ResonantCoefficients co;
    co.t = t;
    co.f1 = params.omega_c - params.beta - params.mu;
    co.f2 = -params.omega_c + (std::sqrt(2.0) - 1.0) * params.beta + params.mu;
    co.theta = 1.0 / (2.0 * co.f1 * co.f1 + 2.0 * gamma * gamma) +
               kWeightPlus / (4.0 * co.f2 * co.f2 + 4.0 * gamma * gamma);
    co.chi = lobe_sum(params) + 1.0 / (params.zkappa() * std::exp(-2.0 * gamma * t));
    return co;
}

double psi_analytic(const ModelParams& params, double t) {
    const ResonantCoefficients co = resonant_coefficients(params, t);
    if (co.chi >= 0.0) return 0.0;
    const double gamma = params.total_gamma();
    const double zk_eff = params.zkappa() * std::exp(-2.0 * gamma * t);
    return std::exp(-gamma * t) * std::sqrt(-co.chi / (zk_eff * co.theta));
}

std::optional<double> critical_coupling(const ModelParams& params, double t) {
    require_resonant(params, "critical_coupling");
    if (t < 0.0) throw std::invalid_argument("time must be non-negative");
    const double s = lobe_sum(params);
    if (s >= 0.0) return std::nullopt;
    return -std::exp(2.0 * params.total_gamma() * t) / s;
}

CrossingTime crossing_time(const ModelParams& params) {
    require_resonant(params, "crossing_time");
    const double gamma = params.total_gamma();
    if (gamma == 0.0) return {CrossingTime::Kind::never, 0.0};

    const auto boundary = critical_coupling(params, 0.0);
    if (!boundary || params.zkappa() <= *boundary)
        return {CrossingTime::Kind::already_mott, 0.0};
    return {CrossingTime::Kind::crosses,
            std::log(params.zkappa() / *boundary) / (2.0 * gamma)};
}

PtCoefficients pt_coefficients_numeric(const ModelParams& params,
                                       const SingleSiteBasis& basis, double t) {
    require_resonant(params, "pt_coefficients_numeric");
    if (basis.n_max < 2)
        throw std::invalid_argument(
            "pt_coefficients_numeric: n_max >= 2 required, intermediate states missing");
    if (params.zkappa() == 0.0)
        throw zero_hopping_error(
            "pt_coefficients_numeric: chi diverges at zkappa = 0; Mott for all couplings");

    // Dressed levels and couplings from the lossless spectrum at psi = 0.
    ModelParams lossless = params;
    lossless.gamma_a = 0.0;
    lossless.gamma_c = 0.0;
    const Eigen::MatrixXd h0 = build_mf_hamiltonian(lossless, 0.0, basis).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h0);
    if (solver.info() != Eigen::Success)
        throw eigensolver_error("pt_coefficients_numeric: eigensolver failed");

    const Eigen::VectorXd energies = solver.eigenvalues();
    const Eigen::MatrixXd vectors = solver.eigenvectors();
    const Eigen::VectorXd numbers = excitation_numbers(basis);

    // Excitation number is conserved at psi = 0; classify levels by <n>.
    auto sector_indices = [&](int n) {
        std::vector<int> idx;
        for (int i = 0; i < energies.size(); ++i) {
            const double nv = vectors.col(i).cwiseAbs2().dot(numbers);
            if (std::abs(nv - n) < 1e-8) idx.push_back(i);
        }
        return idx;
    };
    auto lowest_of = [&](int n, const char* name) {
        const auto idx = sector_indices(n);
        if (idx.empty())
            throw eigensolver_error(std::string("pt_coefficients_numeric: sector ") +
                                    name + " not found in truncated spectrum");
        int best = idx.front();
        for (int i : idx)
            if (energies(i) < energies(best)) best = i;
        return best;
    };

    const int ground = lowest_of(1, "n=1");
    const int vacuum = lowest_of(0, "n=0");
    const int minus2 = lowest_of(2, "n=2");

    const Eigen::MatrixXd coupling_op =
        (photon_annihilation(basis) + photon_annihilation(basis).adjoint()).real();
    const Eigen::VectorXd cg = coupling_op * vectors.col(ground);

    const double gamma = params.total_gamma();
    PtCoefficients pt;
    pt.coupling0_sq = std::pow(vectors.col(vacuum).dot(cg), 2);
    pt.coupling2_sq = std::pow(vectors.col(minus2).dot(cg), 2);
    pt.de0 = energies(ground) - energies(vacuum);
    pt.de2 = energies(ground) - energies(minus2);

    // Complex energy differences with population widths Gamma_n = n gamma.
    const std::complex<double> d0(pt.de0, -(1.0 * gamma - 0.0));
    const std::complex<double> d2(pt.de2, -(1.0 * gamma - 2.0 * gamma));

    pt.chi = pt.coupling0_sq * (1.0 / d0).real() + pt.coupling2_sq * (1.0 / d2).real() +
             1.0 / (params.zkappa() * std::exp(-2.0 * gamma * t));
    pt.theta = pt.coupling0_sq / std::norm(d0) + pt.coupling2_sq / std::norm(d2);
    return pt;
}

} // namespace jch
