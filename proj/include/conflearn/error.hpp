#pragma once

#include <stdexcept>
#include <string>

namespace conflearn {

// Base of every error the library throws. Callers that only care about
// "something went wrong in the model" catch this one.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of a function (e.g. s outside the support).
class DomainError : public Error {
public:
    using Error::Error;
};

// Model parameters violate their invariants (p, u, v, c admissibility).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Operation requires a belief inside a confounding region it is not in.
class RegionError : public Error {
public:
    using Error::Error;
};

// Operation-level precondition failed (e.g. empty confounding region).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A density produced a non-finite value.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, double at)
        : Error(what), at_(at) {}
    double at() const noexcept { return at_; }

private:
    double at_;
};

// Numerical procedure failed to reach its tolerance.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Experiment configuration failed schema validation.
class ConfigError : public Error {
public:
    using Error::Error;
};

// An observed action has zero probability in both states.
class UndefinedEventError : public Error {
public:
    using Error::Error;
};

}  // namespace conflearn
