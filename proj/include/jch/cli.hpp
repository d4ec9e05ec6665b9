// cli.hpp — Command dispatch shared by the jchd binary and the test suites.

#pragma once

#include <ostream>
#include <string_view>

#include "jch/config.hpp"
#include "jch/emit.hpp"

namespace jch {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSolverFailure = 2;
inline constexpr int kExitValidationFailure = 3;

// Runs one of spectrum|boundary|tip|evolve|ramp|validate. The row table goes
// to `out`; one-line machine-readable reports (ramp transition, validate
// summary) go to `report`; failure records go to `error`. max_threads caps
// scan parallelism (0 = default), parallel=false forces the serial path.
int run_command(std::string_view name, const RunConfig& config, OutputFormat format,
                std::ostream& out, std::ostream& report, std::ostream& error,
                int max_threads = 0, bool parallel = true);

} // namespace jch
