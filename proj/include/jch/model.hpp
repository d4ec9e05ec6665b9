// model.hpp — Single-site parameters, dressed spectrum, and decay bookkeeping
// for a lattice of lossy atom-cavity sites.

#pragma once

#include <complex>

#include "jch/errors.hpp"

namespace jch {

// Physical rates of one site plus lattice coordination. All energies in raw
// user units (hbar = 1).
struct ModelParams {
    double omega_a{1.0};  // atomic transition frequency
    double omega_c{1.0};  // cavity mode frequency
    double beta{1.0};     // atom-cavity coupling, > 0
    double gamma_a{0.0};  // atomic decay rate, >= 0
    double gamma_c{0.0};  // cavity decay rate, >= 0
    double mu{0.0};       // chemical potential
    int z{4};             // nearest-neighbor count, >= 1
    double kappa{0.0};    // intercavity hopping rate, >= 0

    double detuning() const { return omega_c - omega_a; }
    double total_gamma() const { return gamma_a + gamma_c; }
    double zkappa() const { return static_cast<double>(z) * kappa; }
    bool lossless() const { return gamma_a == 0.0 && gamma_c == 0.0; }

    // Throws std::invalid_argument naming the violated invariant.
    void validate() const;

    bool operator==(const ModelParams&) const = default;
};

// Default tolerance below which a detuning counts as exact resonance.
double resonance_tolerance(const ModelParams& params);

// detuning_tol < 0 selects resonance_tolerance(params).
bool is_resonant(const ModelParams& params, double detuning_tol = -1.0);

enum class Branch { minus, plus };

// Lossy mode frequency, value() = real - i * imag_decay.
struct ComplexFrequency {
    double real{0.0};
    double imag_decay{0.0};

    std::complex<double> value() const { return {real, -imag_decay}; }
};

ComplexFrequency complex_frequency(double omega, double gamma);

// One dressed level of the single-site spectrum. decay is the population
// decay rate of the level (zero for the vacuum).
struct DressedLevel {
    int n{0};
    Branch branch{Branch::minus};
    double energy{0.0};
    double decay{0.0};
};

// Energy of |branch, n> for n >= 1:  n*omega_c +- sqrt(n*beta^2 + delta^2/4) - delta/2.
// The vacuum |0> has energy 0 and is supplied by callers.
double dressed_energy(const ModelParams& params, int n, Branch branch);

// Total decay rate n * (gamma_a + gamma_c). Valid only on resonance; throws
// off_resonance_error for |detuning| beyond detuning_tol so that non-resonant
// cases go through numeric complex diagonalization instead.
double total_decay(const ModelParams& params, int n, double detuning_tol = -1.0);

// Full level record. On resonance the decay comes from total_decay; off
// resonance it is the population width -2 Im(lambda) of the corresponding
// complex 2x2 sector eigenvalue.
DressedLevel dressed_level(const ModelParams& params, int n, Branch branch);

// gamma_c/omega_c and whether it exceeds the high-Q validity threshold for
// the quasi-boson commutation relation.
struct QualityCheck {
    double correction{0.0};
    bool flagged{false};
};

QualityCheck quality_check(const ModelParams& params, double threshold = 1e-2);

} // namespace jch
