#pragma once

#include <stdexcept>
#include <string>

namespace lrh {

// Bad user input (malformed brackets, inconsistent problems).
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyIntersection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleProblem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an internal construction breaks its own invariants.
struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct PatternMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnlinkedStages : std::logic_error {
    using std::logic_error::logic_error;
};

struct UnderdeterminedSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalDegeneracy : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrackingFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OracleTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lrh
