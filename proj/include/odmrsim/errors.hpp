#pragma once

#include <stdexcept>
#include <string>

namespace odmrsim {

// Thrown when matrix/vector dimensions do not line up.
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input to the Hermitian eigensolver violates the Hermiticity tolerance.
struct NotHermitian : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The Liouvillian null space has dimension > 1; the rate graph is disconnected.
struct DegenerateSteadyState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested integrator step violates the dt * ||L|| stability bound.
struct StepTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Levenberg-Marquardt did not converge within the iteration budget.
struct FitFailed : std::runtime_error {
    int iterations;
    explicit FitFailed(const std::string& msg, int iters = 0)
        : std::runtime_error(msg), iterations(iters) {}
};

// Spectrum has no usable structure (total variation below threshold).
struct FlatSpectrum : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Background wings contain a resonance; the linear fit would be biased.
struct WingsContainPeak : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Both fitted peak areas vanish; the selectivity ratio is undefined.
struct ZeroTotalArea : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration value; `field` names the offending key.
struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(const std::string& field_name, const std::string& msg)
        : std::runtime_error(field_name + ": " + msg), field(field_name) {}
};

// Malformed tabular input; `line` is the 1-based line number.
struct CsvError : std::runtime_error {
    int line;
    CsvError(int line_no, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

}  // namespace odmrsim
