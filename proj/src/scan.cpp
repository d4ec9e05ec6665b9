#include "jch/scan.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "jch/errors.hpp"
#include "jch/perturbation.hpp"

namespace jch {

namespace {

// Runs fn(0..n-1) either on an OpenMP team or on the serial reference path.
// Exceptions are captured per index and the lowest-index one is rethrown, so
// both paths fail identically.
template <typename Fn>
void for_each_index(int n, const ScanOptions& opts, Fn&& fn) {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(std::max(n, 0)));
#ifdef _OPENMP
    if (opts.parallel && n > 1) {
        int team = omp_get_max_threads();
        if (opts.max_threads > 0) team = std::min(team, opts.max_threads);
#pragma omp parallel for schedule(dynamic) num_threads(team)
        for (int i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else
#endif
    {
        for (int i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    }
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

double effective_zkappa(double zkappa_bare, double gamma, double t) {
    return zkappa_bare * std::exp(-2.0 * gamma * t);
}

TimeEvolutionSample evaluate_sample(const ModelParams& params, double t,
                                    const SingleSiteBasis& basis,
                                    const ScanOptions& opts) {
    TimeEvolutionSample sample;
    sample.t = t;
    const double gamma = params.total_gamma();
    sample.envelope = std::exp(-gamma * t);
    // No hopping means no superfluid; psi_analytic itself rejects zkappa = 0.
    sample.psi_analytic = params.zkappa() == 0.0 ? 0.0 : psi_analytic(params, t);

    const auto sol = order_parameter_fixed_point(params, basis, t, opts.solver);
    sample.psi_numeric = sample.envelope * sol.psi;
    const auto obs = site_observables(sol.state, basis);
    sample.mean_n = obs.mean_n;
    sample.var_n = obs.var_n;
    return sample;
}

} // namespace

void RampSpec::validate() const {
    if (kappa0 < 0.0) throw std::invalid_argument("ramp kappa0 must be non-negative");
    if (rate < 0.0) throw std::invalid_argument("ramp rate must be non-negative");
    if (!(t_end > 0.0)) throw std::invalid_argument("ramp t_end must be positive");
    if (samples < 2) throw std::invalid_argument("ramp needs at least 2 samples");
}

std::optional<double> numeric_critical_coupling(const ModelParams& params, double t,
                                                const ScanOptions& opts) {
    params.validate();
    const SingleSiteBasis basis = build_basis(opts.n_max);

    // The scan targets the n=1 lobe; outside it the zero-coupling ground
    // state is a different Mott filling and there is no psi(zkappa) = 0
    // boundary to bisect.
    {
        ModelParams still = params;
        still.kappa = 0.0;
        const auto gs = ground_state(build_mf_hamiltonian(still, 0.0, basis));
        const Eigen::VectorXd weights = gs.state.cwiseAbs2();
        if (std::abs(weights.dot(excitation_numbers(basis)) - 1.0) > 1e-6)
            return std::nullopt;
    }

    auto superfluid = [&](double zkappa) {
        ModelParams probe = params;
        probe.kappa = zkappa / static_cast<double>(probe.z);
        const auto sol = order_parameter_fixed_point(probe, basis, t, opts.solver);
        return sol.psi > opts.sf_threshold;
    };

    double lo = 0.0;
    double hi = opts.zkappa_hi * params.beta;
    if (!superfluid(hi)) return std::nullopt;
    const double tol = opts.bisect_tol * params.beta;
    for (int it = 0; it < opts.bisect_max_iter && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        (superfluid(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<PhaseBoundaryPoint> phase_boundary(const ModelParams& params_template,
                                               std::span<const double> mu_grid, double t,
                                               const ScanOptions& opts) {
    if (mu_grid.empty()) throw std::invalid_argument("mu grid must be nonempty");
    std::vector<PhaseBoundaryPoint> points(mu_grid.size());

    for_each_index(static_cast<int>(mu_grid.size()), opts, [&](int i) {
        PhaseBoundaryPoint& row = points[i];
        row.mu = mu_grid[i];
        row.t = t;
        ModelParams p = params_template;
        p.mu = mu_grid[i];
        try {
            row.zkappa_c_analytic = critical_coupling(p, t);
        } catch (const std::exception& e) {
            row.note = std::string("analytic: ") + e.what();
        }
        try {
            row.zkappa_c_numeric = numeric_critical_coupling(p, t, opts);
        } catch (const std::exception& e) {
            if (!row.note.empty()) row.note += "; ";
            row.note += std::string("numeric: ") + e.what();
        }
    });
    return points;
}

LobeTip lobe_tip(const ModelParams& params_template, double t) {
    params_template.validate();
    ModelParams p = params_template;

    auto boundary = [&](double mu) {
        p.mu = mu;
        const auto zk = critical_coupling(p, t);
        return zk.value_or(0.0);
    };

    // n=1 lobe: F1 < 0 and F2 < 0.
    double a = p.omega_c - p.beta;
    double b = p.omega_c - (std::sqrt(2.0) - 1.0) * p.beta;
    const double tol = 1e-6 * p.beta;
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);

    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = boundary(x1);
    double f2 = boundary(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = boundary(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = boundary(x1);
        }
    }
    LobeTip tip;
    tip.mu_star = 0.5 * (a + b);
    const double zk = boundary(tip.mu_star);
    if (zk <= 0.0)
        throw std::runtime_error("lobe_tip: no transition inside the n=1 lobe");
    tip.zkappa_c = zk;
    return tip;
}

std::vector<TimeEvolutionSample> time_evolution(const ModelParams& params,
                                                std::span<const double> t_grid,
                                                const ScanOptions& opts) {
    if (t_grid.empty()) throw std::invalid_argument("time grid must be nonempty");
    const SingleSiteBasis basis = build_basis(opts.n_max);
    std::vector<TimeEvolutionSample> samples(t_grid.size());
    for_each_index(static_cast<int>(t_grid.size()), opts, [&](int i) {
        samples[i] = evaluate_sample(params, t_grid[i], basis, opts);
    });
    return samples;
}

RampResult ramp_trajectory(const ModelParams& params, const RampSpec& ramp,
                           const ScanOptions& opts) {
    params.validate();
    ramp.validate();

    const double gamma = params.total_gamma();
    const double zk0 = static_cast<double>(params.z) * ramp.kappa0;
    auto effective = [&](double t) {
        return effective_zkappa(zk0 + ramp.rate * t, gamma, t);
    };

    RampResult result;
    ModelParams p0 = params;
    p0.kappa = ramp.kappa0;
    result.zkappa_crit = critical_coupling(p0, 0.0);

    const SingleSiteBasis basis = build_basis(opts.n_max);
    const double dt = ramp.t_end / static_cast<double>(ramp.samples - 1);
    result.samples.resize(ramp.samples);
    for_each_index(ramp.samples, opts, [&](int i) {
        const double t = i * dt;
        ModelParams p = params;
        p.kappa = ramp.kappa0 + ramp.rate * t / static_cast<double>(params.z);
        result.samples[i] = evaluate_sample(p, t, basis, opts);
    });

    if (!result.zkappa_crit) return result;  // Mott for every coupling
    const double crit = *result.zkappa_crit;

    for (int i = 0; i < ramp.samples; ++i) {
        if (effective(i * dt) > crit) {
            result.first_sample = i;
            break;
        }
    }

    // Continuous maximum of (zk0 + rate t) e^{-2 gamma t} over [0, t_end].
    double peak_t = gamma == 0.0 ? ramp.t_end : 0.0;
    if (gamma > 0.0 && ramp.rate > 0.0) {
        const double t_star = 1.0 / (2.0 * gamma) - zk0 / ramp.rate;
        peak_t = std::clamp(t_star, 0.0, ramp.t_end);
    }
    const double peak = std::max(effective(0.0), effective(peak_t));
    if (peak <= crit) return result;  // never reached

    result.reached = true;
    if (effective(0.0) > crit) {
        result.t_cross = 0.0;
        return result;
    }
    // First ascending crossing lies in [0, peak_t]; bisect it.
    double lo = 0.0;
    double hi = result.first_sample > 0
                    ? std::min(peak_t, result.first_sample * dt)
                    : peak_t;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (effective(mid) > crit ? hi : lo) = mid;
    }
    result.t_cross = 0.5 * (lo + hi);
    return result;
}

} // namespace jch
