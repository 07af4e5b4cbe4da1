#pragma once

#include <stdexcept>
#include <string>

namespace pumpshape {

// Invalid user-facing parameters (bad grid size, waist out of bounds,
// malformed config). The CLI maps these to exit code 1.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failures detected at run time (non-finite fields, degenerate
// correlations). The CLI maps these, and any other exception, to exit code 2.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pumpshape
