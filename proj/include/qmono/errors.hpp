#pragma once

#include <stdexcept>
#include <string>

namespace qmono {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A grid function was queried outside its exponent window.
class WindowError : public Error {
public:
    WindowError(const std::string& what, int exponent)
        : Error(what), exponent_(exponent) {}
    int exponent() const { return exponent_; }

private:
    int exponent_;
};

/// Arguments outside an operator's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Fractional order outside the range an operator accepts.
class OrderError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A denominator factor of a q-product vanished.
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// q-Gamma evaluated at a nonpositive integer.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// An infinite product or series hit max_terms before its stopping rule fired.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Inputs violate a theorem precondition that the operation requires.
class HypothesisError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Malformed sweep configuration; the message names the offending field.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A constructed test instance failed its own self-check.
class GeneratorError : public Error {
public:
    using Error::Error;
};

/// Evaluation of a function expression failed at a grid point.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, int exponent)
        : Error(what), exponent_(exponent) {}
    int exponent() const { return exponent_; }

private:
    int exponent_;
};

}  // namespace qmono
