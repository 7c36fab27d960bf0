#pragma once

#include <stdexcept>
#include <string>

namespace gqd {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (on the cut, nonpositive duration, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A denominator vanished: gamma pole, bound-state pole of t(z), ...
class PoleError : public Error {
public:
    using Error::Error;
};

/// An integral that does not converge for the given parameters.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Invalid model parameters or boundary data.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Adaptive step control gave up (path too close to a cut or pole).
class StepFailure : public Error {
public:
    using Error::Error;
};

/// A numerical budget (tail bound, resolution, refinement) was not met.
class ToleranceError : public Error {
public:
    using Error::Error;
};

} // namespace gqd
