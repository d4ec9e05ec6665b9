// meanfield.hpp — Decoupled single-site Hamiltonian with complex quasi-boson
// frequencies, its non-Hermitian ground state, and the order-parameter
// self-consistency loop.

#pragma once

#include <complex>

#include "jch/basis.hpp"
#include "jch/model.hpp"

namespace jch {

// Matrix of
//   Omega_a A^dag A + Omega_c C^dag C + beta (A^dag C + A C^dag)
//   - zkappa psi (C^dag + C) + zkappa psi^2 - mu (A^dag A + C^dag C)
// on the truncated basis, with Omega = omega - i gamma. Hermitian whenever
// gamma_a = gamma_c = 0.
ComplexMatrix build_mf_hamiltonian(const ModelParams& params, double psi,
                                   const SingleSiteBasis& basis);

struct GroundState {
    std::complex<double> energy;
    ComplexVector state;        // unit norm, largest component real positive
    double real_gap{0.0};       // distance of Re(energy) to the next level
    bool near_degenerate{false};
};

// Eigenpair with minimal real part of the eigenvalue (right eigenvector).
// Throws eigensolver_error on non-convergence; flags near-degenerate minima
// (real-part gap < 1e-10) as an advisory.
GroundState ground_state(const ComplexMatrix& hamiltonian);

struct SolverOptions {
    double psi0{0.1};
    double tol{1e-10};
    int max_iter{10000};
    double mixing{0.5};  // applied once the iteration starts oscillating

    bool operator==(const SolverOptions&) const = default;
};

struct OrderParameterSolution {
    double psi{0.0};        // >= 0 by phase convention
    double psi_gamma{0.0};  // |Im <C>| at the fixed point
    std::complex<double> ground_energy;
    ComplexVector state;
    int iterations{0};
    double residual{0.0};
    bool converged{false};
    bool near_degenerate{false};
};

// Iterates psi <- max(0, Re<C>) at hopping strength zkappa * exp(-2 gamma t)
// until |psi_{k+1} - psi_k| < tol. A non-converged result carries the last
// residual; converged-to-zero is a valid fixed point, not a failure.
OrderParameterSolution order_parameter_fixed_point(const ModelParams& params,
                                                   const SingleSiteBasis& basis,
                                                   double t,
                                                   const SolverOptions& opts = {});

// |psi(n_max) - psi(n_max + 2)|, the solver's own truncation check.
double truncation_residual(const ModelParams& params, int n_max, double t,
                           const SolverOptions& opts = {});

struct SiteObservables {
    double mean_n{0.0};
    double var_n{0.0};
    double mean_photons{0.0};
};

// <n>, <n^2>-<n>^2 and <C^dag C> for a unit-norm state (norm deviation above
// 1e-8 is rejected).
SiteObservables site_observables(const ComplexVector& state, const SingleSiteBasis& basis);

} // namespace jch
