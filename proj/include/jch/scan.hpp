// scan.hpp — Grid evaluations over (mu, zkappa, t): phase boundaries, the
// lobe tip, time evolution, and coupling ramps. Grid points are independent;
// the OpenMP drivers write results by index, so outputs are identical to the
// serial reference for any schedule or thread count.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jch/meanfield.hpp"
#include "jch/model.hpp"

namespace jch {

struct ScanOptions {
    SolverOptions solver{};
    int n_max{8};
    double zkappa_hi{1.0};     // bisection bracket top, units of beta
    double bisect_tol{1e-6};   // on zkappa, units of beta
    int bisect_max_iter{60};
    double sf_threshold{1e-6}; // psi above this counts as superfluid
    bool parallel{true};       // false selects the serial reference path
    int max_threads{0};        // 0 = OpenMP default; > 0 caps the team size
};

struct PhaseBoundaryPoint {
    double mu{0.0};
    std::optional<double> zkappa_c_analytic;
    std::optional<double> zkappa_c_numeric;
    double t{0.0};
    std::string note;  // per-point failure record, empty on success
};

struct TimeEvolutionSample {
    double t{0.0};
    double psi_analytic{0.0};
    double psi_numeric{0.0};
    double envelope{1.0};  // e^{-gamma t}
    double mean_n{0.0};
    double var_n{0.0};
};

struct RampSpec {
    double kappa0{0.0};  // initial hopping, >= 0
    double rate{0.0};    // d(zkappa)/dt, >= 0
    double t_end{1.0};
    int samples{2};

    void validate() const;

    bool operator==(const RampSpec&) const = default;
};

struct LobeTip {
    double mu_star{0.0};
    double zkappa_c{0.0};
};

struct RampResult {
    std::vector<TimeEvolutionSample> samples;
    bool reached{false};
    double t_cross{0.0};                  // first crossing time, valid when reached
    int first_sample{-1};                 // first sample at or beyond the boundary
    std::optional<double> zkappa_crit;    // gamma-shifted boundary, nullopt if none
};

// Boundary of psi = 0 in zkappa at params.mu by bisection of the fixed-point
// solver; nullopt when no transition occurs inside the bracket.
std::optional<double> numeric_critical_coupling(const ModelParams& params, double t,
                                                const ScanOptions& opts = {});

// Analytic (chi = 0) and fixed-point boundaries per mu. Per-point failures
// land in the row's note instead of aborting the scan.
std::vector<PhaseBoundaryPoint> phase_boundary(const ModelParams& params_template,
                                               std::span<const double> mu_grid, double t,
                                               const ScanOptions& opts = {});

// Maximum of the analytic boundary over the n=1 lobe by golden-section
// search (mu tolerance 1e-6 beta). Throws if no mu in the lobe admits a
// transition.
LobeTip lobe_tip(const ModelParams& params_template, double t);

std::vector<TimeEvolutionSample> time_evolution(const ModelParams& params,
                                                std::span<const double> t_grid,
                                                const ScanOptions& opts = {});

// Quasi-static ramp zkappa(t) = zkappa0 + rate*t under coherence decay
// e^{-2 gamma t}; reports whether and when the effective coupling first
// exceeds the gamma-shifted critical coupling.
RampResult ramp_trajectory(const ModelParams& params, const RampSpec& ramp,
                           const ScanOptions& opts = {});

} // namespace jch
