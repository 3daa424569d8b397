#pragma once

#include <stdexcept>
#include <string>

namespace qle {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// The requested quantity is a divergent integral for this model.
// The message names the supported alternative observable.
struct DivergenceError : Error {
    using Error::Error;
};

// Operation not defined for this bath/model kind.
struct UnsupportedError : Error {
    using Error::Error;
};

// Parameter set violates the causality bound (bare mass would be negative).
struct CausalityError : Error {
    using Error::Error;
};

// Adaptive quadrature did not converge; carries the partial result.
struct ConvergenceError : Error {
    double partial_value;
    double error_estimate;
    ConvergenceError(const std::string& msg, double value, double estimate)
        : Error(msg), partial_value(value), error_estimate(estimate) {}
};

// Tabulated data does not cover the requested range.
struct CoverageError : Error {
    double suggested_omega_max;
    CoverageError(const std::string& msg, double suggestion)
        : Error(msg), suggested_omega_max(suggestion) {}
};

// Input file / config schema violation.
struct ValidationError : Error {
    using Error::Error;
};

// A simulated trajectory exceeded the overflow guard.
struct BlowUpError : Error {
    int path_index;
    BlowUpError(const std::string& msg, int path)
        : Error(msg), path_index(path) {}
};

}  // namespace qle
