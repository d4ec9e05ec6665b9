#include "jch/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jch {

void ModelParams::validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (gamma_a < 0.0) throw std::invalid_argument("gamma_a must be non-negative");
    if (gamma_c < 0.0) throw std::invalid_argument("gamma_c must be non-negative");
    if (kappa < 0.0) throw std::invalid_argument("kappa must be non-negative");
    if (z < 1) throw std::invalid_argument("z must be at least 1");
    if (!std::isfinite(omega_a) || !std::isfinite(omega_c) || !std::isfinite(mu))
        throw std::invalid_argument("frequencies and mu must be finite");
}

double resonance_tolerance(const ModelParams& params) {
    return 1e-9 * params.beta;
}

bool is_resonant(const ModelParams& params, double detuning_tol) {
    const double tol = detuning_tol < 0.0 ? resonance_tolerance(params) : detuning_tol;
    return std::abs(params.detuning()) <= tol;
}

ComplexFrequency complex_frequency(double omega, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("decay rate must be non-negative");
    return {omega, gamma};
}

double dressed_energy(const ModelParams& params, int n, Branch branch) {
    if (n < 1) throw std::invalid_argument("dressed levels require n >= 1");
    const double delta = params.detuning();
    const double split = std::sqrt(n * params.beta * params.beta + 0.25 * delta * delta);
    const double sign = branch == Branch::plus ? 1.0 : -1.0;
    return n * params.omega_c + sign * split - 0.5 * delta;
}

double total_decay(const ModelParams& params, int n, double detuning_tol) {
    if (n < 0) throw std::invalid_argument("excitation number must be non-negative");
    if (!is_resonant(params, detuning_tol))
        throw off_resonance_error(
            "total_decay: closed form holds only at delta = 0 (detuning = " +
            std::to_string(params.detuning()) + "); use numeric complex diagonalization");
    return n * params.total_gamma();
}

DressedLevel dressed_level(const ModelParams& params, int n, Branch branch) {
    DressedLevel level;
    level.n = n;
    level.branch = branch;
    if (n == 0) return level;
    level.energy = dressed_energy(params, n, branch);
    if (is_resonant(params)) {
        level.decay = total_decay(params, n);
        return level;
    }
    // Sector-n complex eigenvalues of the 2x2 block {|g,n>, |e,n-1>}.
    const std::complex<double> dg(n * params.omega_c, -n * params.gamma_c);
    const std::complex<double> de(params.omega_a + (n - 1) * params.omega_c,
                                  -((n - 1) * params.gamma_c + params.gamma_a));
    const std::complex<double> mean = 0.5 * (dg + de);
    const std::complex<double> half = 0.5 * (dg - de);
    const std::complex<double> root =
        std::sqrt(half * half + std::complex<double>(n * params.beta * params.beta, 0.0));
    std::complex<double> lo = mean - root;
    std::complex<double> hi = mean + root;
    if (lo.real() > hi.real()) std::swap(lo, hi);
    const std::complex<double> lambda = branch == Branch::plus ? hi : lo;
    level.decay = -2.0 * lambda.imag();
    return level;
}

QualityCheck quality_check(const ModelParams& params, double threshold) {
    if (!(params.omega_c > 0.0))
        throw std::invalid_argument("quality_check requires omega_c > 0");
    QualityCheck check;
    check.correction = params.gamma_c / params.omega_c;
    check.flagged = check.correction > threshold;
    return check;
}

} // namespace jch
