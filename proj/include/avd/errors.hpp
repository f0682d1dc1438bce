#pragma once

#include <stdexcept>
#include <string>

namespace avd {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or rejected input (bad file, bad graph, bad parameters).
/// CLI maps this family to exit code 2.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// The graph contains a component of order two with at least one edge.
/// No adjacent vertex distinguishing colouring can exist for such a pair.
class IsolatedEdgeError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// A threshold in the profile cannot be met by any random outcome;
/// detected before sampling starts.
class InfeasibleThresholds : public Error {
public:
    using Error::Error;
};

/// The resampling loop hit its max_resample budget.
class ResampleBudgetExhausted : public Error {
public:
    using Error::Error;
};

/// The initial proper colouring search gave up (lists below the greedy
/// guarantee and backtracking budget exhausted).
class ColouringNotFound : public Error {
public:
    using Error::Error;
};

/// greedy_finish found an edge whose reserved list is fully blocked.
class NoFreeReservedColour : public Error {
public:
    using Error::Error;
};

/// A list is too short for a greedy guarantee that the caller relies on.
class ListTooShort : public Error {
public:
    using Error::Error;
};

/// Oracle instance exceeds the configured search caps.
class CapExceeded : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// A ReductionLog does not match the graph it is replayed against.
class LogMismatch : public Error {
public:
    using Error::Error;
};

} // namespace avd
