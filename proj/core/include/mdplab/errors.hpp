#pragma once

#include <stdexcept>
#include <string>

namespace mdplab {

/// Input failed a structural or stochasticity check (bad shapes, rows not
/// summing to one, negative probabilities, ...). Maps to CLI exit status 2.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A file could not be parsed into the expected schema. Maps to exit status 2.
class ParseError : public ValidationError {
  public:
    explicit ParseError(const std::string& what) : ValidationError(what) {}
};

/// A linear system was singular to working precision. On valid stochastic
/// inputs this signals violated structural preconditions (e.g. several
/// recurrent classes where one was required).
class SingularMatrixError : public std::runtime_error {
  public:
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// An operation requiring a single recurrent class was invoked on a chain
/// that does not have one.
class NotUnichainError : public std::runtime_error {
  public:
    explicit NotUnichainError(const std::string& what) : std::runtime_error(what) {}
};

/// Two supposedly equivalent computation routes disagreed beyond tolerance.
/// Maps to CLI exit status 1: it falsifies an identity the code relies on.
class ConsistencyError : public std::runtime_error {
  public:
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mdplab
