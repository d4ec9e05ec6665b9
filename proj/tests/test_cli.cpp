#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "jch/cli.hpp"
#include "jch/config.hpp"
#include "jch/emit.hpp"

using namespace jch;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

struct Run {
    int code;
    std::string out;
    std::string report;
    std::string error;
};

Run run(const std::string& command, const std::string& config_text,
        OutputFormat format = OutputFormat::csv) {
    const RunConfig config = parse_config(config_text);
    std::ostringstream out, report, error;
    const int code = run_command(command, config, format, out, report, error);
    return {code, out.str(), report.str(), error.str()};
}

} // namespace

TEST_CASE("config defaults") {
    const RunConfig cfg = parse_config("model.beta = 1.0\nmodel.gamma_c = 0.05\n");
    CHECK(cfg.params.gamma_a == 0.0);
    CHECK(cfg.params.gamma_c == 0.05);
    CHECK(cfg.params.omega_a == cfg.params.omega_c);  // delta = 0 by default
    CHECK(cfg.params.z == 4);
    CHECK(cfg.n_max == 8);
    CHECK(cfg.solver.tol == 1e-10);
    CHECK(cfg.units == Units::beta_normalized);
}

TEST_CASE("config rejects invariant violations by name") {
    CHECK_THROWS_WITH_AS(parse_config("model.beta = -1\n"), "beta must be positive",
                         config_error);
}

TEST_CASE("config rejects unknown keys with the key name and line") {
    try {
        parse_config("model.beta = 1.0\nmodel.unknown = 3\n");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("model.unknown") != std::string::npos);
        CHECK(e.line == 2);
    }
}

TEST_CASE("config parse errors carry line and column") {
    try {
        parse_config("model.beta = 1.0\nmodel.kappa 0.05\n");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(parse_config("model.beta = abc\n"), config_error);
    CHECK_THROWS_AS(parse_config("model.beta = 1\nmodel.beta = 2\n"), config_error);
}

TEST_CASE("config render/parse round trip") {
    RunConfig cfg = parse_config(
        "units = raw\nmodel.beta = 0.7\nmodel.gamma_a = 0.003\nmodel.mu = 0.19\n"
        "solver.n_max = 6\nscan.mu_points = 7\nramp.rate = 0.02\nevolve.t_max = 4.5\n");
    const RunConfig again = parse_config(render_config(cfg));
    CHECK(again == cfg);

    // beta-normalized configs round trip through render as well
    cfg = parse_config("model.beta = 2.0\nmodel.kappa = 0.04\n");
    CHECK(parse_config(render_config(cfg)) == cfg);
}

TEST_CASE("beta-normalized units scale into raw quantities") {
    const RunConfig cfg = parse_config(
        "units = beta\nmodel.beta = 2.0\nmodel.gamma_c = 0.05\nmodel.kappa = 0.04\n"
        "evolve.t_max = 3\n");
    const auto res = cfg.resolved();
    CHECK(res.params.beta == 2.0);
    CHECK(res.params.gamma_c == 0.1);
    CHECK(res.params.kappa == 0.08);
    CHECK(res.t_grid.back() == doctest::Approx(1.5));

    const RunConfig raw = parse_config(
        "units = raw\nmodel.beta = 2.0\nmodel.gamma_c = 0.05\nmodel.kappa = 0.04\n");
    CHECK(raw.resolved().params.gamma_c == 0.05);
}

TEST_CASE("emitter output shapes") {
    Table table;
    table.columns = {"t", "psi_analytic", "psi_numeric", "envelope", "mean_n", "var_n"};

    SUBCASE("empty table is just the header") {
        std::ostringstream out;
        emit_csv(table, out);
        CHECK(out.str() == "t,psi_analytic,psi_numeric,envelope,mean_n,var_n\n");
    }

    SUBCASE("one sample makes two lines of six fields") {
        table.add_row({0.5, 0.3, 0.29, 0.99, 1.0, 0.01});
        std::ostringstream out;
        emit_csv(table, out);
        const auto lines = split_lines(out.str());
        REQUIRE(lines.size() == 2);
        CHECK(split_csv(lines[0]).size() == 6);
        CHECK(split_csv(lines[1]).size() == 6);
    }

    SUBCASE("emission is byte deterministic") {
        table.add_row({0.1, 1.0 / 3.0, 0.0, 1.0, 0.999999999999, 2e-17});
        std::ostringstream a, b;
        emit_csv(table, a);
        emit_csv(table, b);
        CHECK(a.str() == b.str());
        std::ostringstream ja, jb;
        emit_json(table, ja);
        emit_json(table, jb);
        CHECK(ja.str() == jb.str());
    }

    SUBCASE("json carries the field names and nulls for empty cells") {
        table.add_row({0.5, Cell{}, 0.29, 0.99, 1.0, 0.01});
        std::ostringstream out;
        emit_json(table, out);
        CHECK(out.str().find("\"psi_analytic\": null") != std::string::npos);
        CHECK(out.str().find("\"t\": 0.5") != std::string::npos);
    }
}

TEST_CASE("tip command reports the critical ratio") {
    const auto r = run("tip", "model.gamma_c = 0\n");
    CHECK(r.code == kExitOk);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "mu_star,zkappa_c_analytic,zkappa_c_numeric,t");
    const auto fields = split_csv(lines[1]);
    REQUIRE(fields.size() == 4);
    CHECK(std::stod(fields[1]) == doctest::Approx(0.160).epsilon(0.032));
    CHECK(std::stod(fields[2]) == doctest::Approx(std::stod(fields[1])).epsilon(0.15));
}

TEST_CASE("evolve command keeps psi constant in the closed system") {
    const auto r = run("evolve",
                       "model.gamma_c = 0\nmodel.kappa = 0.05\n"
                       "evolve.t_max = 2\nevolve.t_points = 9\n");
    CHECK(r.code == kExitOk);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 10);
    const std::string psi = split_csv(lines[1])[1];
    CHECK(psi != "0");
    for (std::size_t i = 2; i < lines.size(); ++i)
        CHECK(split_csv(lines[i])[1] == psi);
}

TEST_CASE("identical configs emit byte-identical tables") {
    const std::string cfg =
        "model.gamma_c = 0.02\nscan.mu_points = 3\nscan.mu_min = 0.1\n"
        "scan.mu_max = 0.4\nsolver.n_max = 6\n";
    const auto a = run("boundary", cfg);
    const auto b = run("boundary", cfg);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);

    // thread count must not leak into the output
    const RunConfig config = parse_config(cfg);
    std::ostringstream one_thread, many;
    std::ostringstream rep, err;
    run_command("boundary", config, OutputFormat::csv, one_thread, rep, err, 1);
    run_command("boundary", config, OutputFormat::csv, many, rep, err, 8);
    CHECK(one_thread.str() == many.str());
    CHECK(one_thread.str() == a.out);
}

TEST_CASE("boundary command handles out-of-lobe rows") {
    // just below the n=1 lobe the 1/(2 F1) term keeps S positive
    const auto r = run("boundary",
                       "scan.mu_min = -0.05\nscan.mu_max = -0.02\nscan.mu_points = 2\n"
                       "solver.n_max = 5\n");
    CHECK(r.code == kExitOk);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 3);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_csv(lines[i]);
        REQUIRE(fields.size() == 5);
        CHECK(fields[1].empty());  // no analytic transition
        CHECK(fields[2].empty());  // no numeric transition
    }
}

TEST_CASE("spectrum command lists the dressed levels") {
    const auto r = run("spectrum",
                       "units = raw\nmodel.beta = 0.02\nmodel.gamma_c = 0.02\n"
                       "model.kappa = 0.001\nmodel.mu = 0\nspectrum.levels = 3\n");
    CHECK(r.code == kExitOk);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 8);  // header + ground + 3 levels x 2 branches
    CHECK(split_csv(lines[1])[1] == "ground");
    const auto minus1 = split_csv(lines[2]);
    CHECK(minus1[1] == "minus");
    CHECK(std::stod(minus1[2]) == doctest::Approx(0.98).epsilon(1e-10));
    CHECK(std::stod(minus1[3]) == doctest::Approx(0.02).epsilon(1e-10));
    CHECK(r.report.find("low-Q") != std::string::npos);  // gamma_c/omega_c = 0.02

    const auto high_q = run("spectrum", "model.gamma_c = 0.001\n");
    CHECK(high_q.report.empty());
}

TEST_CASE("ramp command writes a transition report") {
    const auto r = run("ramp",
                       "model.gamma_c = 0.01\nmodel.kappa = 0\n"
                       "ramp.rate = 0.05\nramp.t_end = 6\nramp.samples = 13\n");
    CHECK(r.code == kExitOk);
    CHECK(r.report.find("ramp-transition status=reached") != std::string::npos);
    CHECK(r.report.find("t_cross=") != std::string::npos);

    const auto stuck = run("ramp",
                           "model.gamma_c = 0.05\nmodel.kappa = 0.01\n"
                           "ramp.rate = 0\nramp.t_end = 6\nramp.samples = 7\n");
    CHECK(stuck.code == kExitOk);
    CHECK(stuck.report.find("ramp-transition status=never") != std::string::npos);
}

TEST_CASE("validate command gates on the deviation bound") {
    const std::string grid =
        "scan.mu_min = 0.1\nscan.mu_max = 0.35\nscan.mu_points = 4\nsolver.n_max = 6\n";
    const auto pass = run("validate", grid);
    CHECK(pass.code == kExitOk);
    CHECK(pass.report.find("result=pass") != std::string::npos);

    const auto fail = run("validate", grid + "validate.bound = 1e-6\n");
    CHECK(fail.code == kExitValidationFailure);
    CHECK(fail.report.find("result=fail") != std::string::npos);
}

TEST_CASE("unknown command is a usage error") {
    const auto r = run("frobnicate", "model.beta = 1\n");
    CHECK(r.code == kExitUsage);
    CHECK(r.error.find("jchd-error") != std::string::npos);
}

TEST_CASE("computational failures return the solver exit code") {
    // detuned model: the analytic branch of evolve cannot run
    const auto r = run("evolve", "model.omega_a = 0.9\nevolve.t_points = 3\n");
    CHECK(r.code == kExitSolverFailure);
    CHECK(r.error.find("jchd-error") != std::string::npos);
}
