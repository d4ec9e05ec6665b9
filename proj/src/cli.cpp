#include "jch/cli.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "jch/errors.hpp"
#include "jch/perturbation.hpp"
#include "jch/scan.hpp"

namespace jch {

namespace {

const char* branch_name(Branch b) { return b == Branch::minus ? "minus" : "plus"; }

void error_record(std::ostream& err, std::string_view command, int code,
                  const std::string& message) {
    std::string quoted;
    for (char c : message) {
        if (c == '"' || c == '\\') quoted += '\\';
        quoted += c;
    }
    err << "jchd-error command=" << command << " code=" << code << " message=\""
        << quoted << "\"\n";
}

Table evolution_table(const std::vector<TimeEvolutionSample>& samples) {
    Table table;
    table.columns = {"t", "psi_analytic", "psi_numeric", "envelope", "mean_n", "var_n"};
    for (const auto& s : samples)
        table.add_row({s.t, s.psi_analytic, s.psi_numeric, s.envelope, s.mean_n, s.var_n});
    return table;
}

int cmd_spectrum(const RunConfig& config, OutputFormat format, std::ostream& out,
                 std::ostream& report) {
    const ModelParams params = config.resolved().params;
    Table table;
    table.columns = {"n", "branch", "energy", "decay"};
    table.add_row({0, "ground", 0.0, 0.0});
    for (int n = 1; n <= config.spectrum_levels; ++n)
        for (Branch b : {Branch::minus, Branch::plus}) {
            const DressedLevel level = dressed_level(params, n, b);
            table.add_row({n, branch_name(b), level.energy, level.decay});
        }
    emit(table, format, out);

    const QualityCheck qc = quality_check(params);
    if (qc.flagged)
        report << "advisory low-Q cavity: gamma_c/omega_c = "
               << format_number(qc.correction)
               << " exceeds 0.01; the quasi-boson commutator deviates from bosonic\n";
    return kExitOk;
}

int cmd_boundary(const RunConfig& config, OutputFormat format, std::ostream& out,
                 const ScanOptions& opts) {
    const auto res = config.resolved();
    const auto points = phase_boundary(res.params, res.mu_grid, res.scan_t, opts);
    Table table;
    table.columns = {"mu", "zkappa_c_analytic", "zkappa_c_numeric", "t", "note"};
    for (const auto& p : points)
        table.add_row({p.mu, p.zkappa_c_analytic, p.zkappa_c_numeric, p.t,
                       p.note.empty() ? Cell{} : Cell{p.note}});
    emit(table, format, out);
    return kExitOk;
}

int cmd_tip(const RunConfig& config, OutputFormat format, std::ostream& out,
            const ScanOptions& opts) {
    const auto res = config.resolved();
    const LobeTip tip = lobe_tip(res.params, res.scan_t);
    ModelParams at_tip = res.params;
    at_tip.mu = tip.mu_star;
    const auto numeric = numeric_critical_coupling(at_tip, res.scan_t, opts);
    Table table;
    table.columns = {"mu_star", "zkappa_c_analytic", "zkappa_c_numeric", "t"};
    table.add_row({tip.mu_star, tip.zkappa_c, numeric, res.scan_t});
    emit(table, format, out);
    return kExitOk;
}

int cmd_evolve(const RunConfig& config, OutputFormat format, std::ostream& out,
               const ScanOptions& opts) {
    const auto res = config.resolved();
    emit(evolution_table(time_evolution(res.params, res.t_grid, opts)), format, out);
    return kExitOk;
}

int cmd_ramp(const RunConfig& config, OutputFormat format, std::ostream& out,
             std::ostream& report, const ScanOptions& opts) {
    const auto res = config.resolved();
    const RampResult result = ramp_trajectory(res.params, res.ramp, opts);
    emit(evolution_table(result.samples), format, out);

    report << "ramp-transition status=" << (result.reached ? "reached" : "never");
    if (result.reached)
        report << " t_cross=" << format_number(result.t_cross)
               << " first_sample=" << result.first_sample;
    report << " zkappa_crit="
           << (result.zkappa_crit ? format_number(*result.zkappa_crit) : "none")
           << "\n";
    return kExitOk;
}

int cmd_validate(const RunConfig& config, OutputFormat format, std::ostream& out,
                 std::ostream& report, const ScanOptions& opts) {
    const auto res = config.resolved();
    const auto points = phase_boundary(res.params, res.mu_grid, res.scan_t, opts);

    Table table;
    table.columns = {"mu", "zkappa_c_analytic", "zkappa_c_numeric", "rel_dev"};
    double max_dev = 0.0;
    bool solver_trouble = false;
    for (const auto& p : points) {
        if (!p.note.empty()) solver_trouble = true;
        Cell dev;
        if (p.zkappa_c_analytic && p.zkappa_c_numeric) {
            const double d =
                std::abs(*p.zkappa_c_analytic - *p.zkappa_c_numeric) / *p.zkappa_c_analytic;
            max_dev = std::max(max_dev, d);
            dev = Cell{d};
        } else if (p.zkappa_c_analytic || p.zkappa_c_numeric) {
            // One branch sees a transition the other does not.
            max_dev = std::numeric_limits<double>::infinity();
            dev = Cell{max_dev};
        }
        table.add_row({p.mu, p.zkappa_c_analytic, p.zkappa_c_numeric, dev});
    }
    emit(table, format, out);

    const bool pass = !solver_trouble && max_dev <= config.validate_bound;
    report << "validate max_rel_dev=" << format_number(max_dev)
           << " bound=" << format_number(config.validate_bound)
           << " rows=" << points.size() << " result=" << (pass ? "pass" : "fail")
           << "\n";
    if (solver_trouble) return kExitSolverFailure;
    return pass ? kExitOk : kExitValidationFailure;
}

} // namespace

int run_command(std::string_view name, const RunConfig& config, OutputFormat format,
                std::ostream& out, std::ostream& report, std::ostream& error,
                int max_threads, bool parallel) {
    ScanOptions opts;
    opts.solver = config.solver;
    opts.n_max = config.n_max;
    opts.parallel = parallel;
    opts.max_threads = max_threads;

    try {
        if (name == "spectrum") return cmd_spectrum(config, format, out, report);
        if (name == "boundary") return cmd_boundary(config, format, out, opts);
        if (name == "tip") return cmd_tip(config, format, out, opts);
        if (name == "evolve") return cmd_evolve(config, format, out, opts);
        if (name == "ramp") return cmd_ramp(config, format, out, report, opts);
        if (name == "validate") return cmd_validate(config, format, out, report, opts);
    } catch (const std::exception& e) {
        error_record(error, name, kExitSolverFailure, e.what());
        return kExitSolverFailure;
    }
    error_record(error, name, kExitUsage, "unknown command");
    return kExitUsage;
}

} // namespace jch
