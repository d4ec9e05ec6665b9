// perturbation.hpp — Closed-form second-order results for the resonant
// one-excitation site: chi, Theta, psi(t), the critical coupling, its
// dissipative shift, and the crossing time, plus a numeric second-order
// route that must reproduce the closed forms.

#pragma once

#include <optional>

#include "jch/basis.hpp"
#include "jch/model.hpp"

namespace jch {

struct ResonantCoefficients {
    double f1{0.0};     // omega_c - beta - mu
    double f2{0.0};     // -omega_c + (sqrt(2)-1) beta + mu
    double theta{0.0};  // > 0
    double chi{0.0};
    double t{0.0};
};

// Valid only at delta = 0 (throws off_resonance_error otherwise); throws
// zero_hopping_error when kappa = 0 since chi diverges there (Mott for all
// couplings).
ResonantCoefficients resonant_coefficients(const ModelParams& params, double t);

// e^{-gamma t} sqrt(-chi / (zkappa e^{-2 gamma t} Theta)) when chi < 0, else 0.
double psi_analytic(const ModelParams& params, double t);

// Root of chi = 0 in the coupling: zkappa_c = -e^{2 gamma t} / S with
// S = F1/(2F1^2+2g^2) + (3+2sqrt2) F2/(4F2^2+4g^2). nullopt means S >= 0:
// no transition, the site is Mott-like for every coupling at this mu.
std::optional<double> critical_coupling(const ModelParams& params, double t);

struct CrossingTime {
    enum class Kind { crosses, never, already_mott };
    Kind kind{Kind::never};
    double t_c{0.0};  // valid when kind == crosses
};

// Positive root of zkappa e^{-2 gamma t} = zkappa'_c, the time at which
// coherence decay drags an initially superfluid site across the boundary.
// gamma = 0 yields `never`; zkappa at or below the shifted boundary yields
// `already_mott`.
CrossingTime crossing_time(const ModelParams& params);

struct PtCoefficients {
    double chi{0.0};
    double theta{0.0};
    // diagnostics: squared couplings and real energy gaps per intermediate
    double coupling0_sq{0.0};  // |<0|C+C^dag|g>|^2
    double coupling2_sq{0.0};  // |<-,2|C+C^dag|g>|^2
    double de0{0.0};           // E_g - E_0
    double de2{0.0};           // E_g - E_{-,2}
};

// Second-order energy response of |-,1> to -zkappa_eff psi (C + C^dag),
// built from numerically diagonalized dressed levels: couplings from the
// lossless eigenvectors, complex denominators from the level energies with
// population widths n(gamma_a+gamma_c). Intermediates are the vacuum and the
// negative-branch two-excitation level, the set that enters the closed form.
PtCoefficients pt_coefficients_numeric(const ModelParams& params,
                                       const SingleSiteBasis& basis, double t);

} // namespace jch
