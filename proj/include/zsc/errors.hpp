#pragma once

#include <stdexcept>
#include <string>

namespace zsc {

// Base class for all recoverable errors raised by the library. The CLI maps
// subclasses onto process exit codes (see tools/).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid argument: value outside its mathematical window.
struct DomainError : Error {
    using Error::Error;
};

// Constraint-set sampling produced no feasible points.
struct EmptyConstraintSet : DomainError {
    using DomainError::DomainError;
};

// Iterative refinement stalled before reaching its tolerance.
struct OptimizerDidNotConverge : Error {
    using Error::Error;
};

// Chart metric is numerically singular at the requested parameters.
struct DegenerateChart : DomainError {
    using DomainError::DomainError;
};

// A pointwise check was asked for at a point where its hypothesis fails.
struct NotApplicable : DomainError {
    using DomainError::DomainError;
};

// Requested region is not contained in the model's chart domain.
struct DomainExceeded : DomainError {
    using DomainError::DomainError;
};

// Subfocal radius function 1/|A| undefined because |A| vanishes.
struct SubfocalUndefined : DomainError {
    using DomainError::DomainError;
};

// Young's-inequality parameter too large: pinching margin nonpositive.
struct DeltaTooLarge : DomainError {
    using DomainError::DomainError;
};

// Quadratic-form evaluation only supports radial test functions.
struct NonRadialUnsupported : DomainError {
    using DomainError::DomainError;
};

// CLI/JSON configuration failed validation; message names the field.
struct ConfigInvalid : Error {
    using Error::Error;
};

}  // namespace zsc
