// errors.hpp — Error types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace jch {

// A resonance-only formula was evaluated at finite detuning.
struct off_resonance_error : std::domain_error {
    explicit off_resonance_error(const std::string& what) : std::domain_error(what) {}
};

// chi was requested at zero hopping; it diverges there and the system is
// Mott-like for every coupling.
struct zero_hopping_error : std::domain_error {
    explicit zero_hopping_error(const std::string& what) : std::domain_error(what) {}
};

struct eigensolver_error : std::runtime_error {
    explicit eigensolver_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace jch
