#ifndef TUMORLIN_ERRORS_HPP
#define TUMORLIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tumorlin {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shooting residual has no sign change on the scanned radius range.
struct NoBracket : SolverError {
    using SolverError::SolverError;
};

// p left [0, 1+eps] (or v hit zero in the interior) during integration.
struct SingularStep : SolverError {
    using SolverError::SolverError;
};

struct CFLViolation : SolverError {
    using SolverError::SolverError;
};

struct Blowup : SolverError {
    using SolverError::SolverError;
};

// Resolvent requested at lambda at or below the spectral bound.
struct SpectralViolation : SolverError {
    using SolverError::SolverError;
};

// A sign condition that the model's rate inequalities should guarantee failed.
struct ConditionViolated : SolverError {
    using SolverError::SolverError;
};

struct NoThreshold : SolverError {
    using SolverError::SolverError;
};

struct UnsupportedDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace tumorlin

#endif
