// config.hpp — Strict `key = value` run configuration with dotted sections,
// documented defaults, and a render/parse round trip.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jch/meanfield.hpp"
#include "jch/model.hpp"
#include "jch/scan.hpp"

namespace jch {

struct config_error : std::runtime_error {
    int line{0};
    int column{0};
    config_error(const std::string& what, int line_ = 0, int column_ = 0)
        : std::runtime_error(what), line(line_), column(column_) {}
};

enum class Units { beta_normalized, raw };

struct GridSpec {
    double min{0.0};
    double max{0.0};
    int points{1};

    std::vector<double> expand() const;

    bool operator==(const GridSpec&) const = default;
};

// Values are stored exactly as written (in the declared unit convention);
// resolved() converts to raw units for the computational layer.
struct RunConfig {
    Units units{Units::beta_normalized};
    ModelParams params;
    SolverOptions solver;
    int n_max{8};
    GridSpec mu_grid;
    GridSpec t_grid{0.0, 3.0, 61};
    RampSpec ramp{0.0, 0.01, 20.0, 101};
    double scan_t{0.0};
    double validate_bound{0.15};
    int spectrum_levels{8};

    void validate() const;

    struct Resolved {
        ModelParams params;
        std::vector<double> mu_grid;
        std::vector<double> t_grid;
        RampSpec ramp;
        double scan_t{0.0};
    };

    // In the beta-normalized convention rates are multiples of beta and
    // times are multiples of 1/beta.
    Resolved resolved() const;

    bool operator==(const RunConfig&) const = default;
};

// Throws config_error carrying line/column for parse errors; validation
// errors name the violated invariant. Unknown and duplicate keys are fatal.
RunConfig parse_config(std::string_view text);

// Emits every key; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& config);

} // namespace jch
