#pragma once

#include <stdexcept>
#include <string>

namespace persuasion {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatch, non-plausible experiment,
/// negative shadow price, wrong support shape.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A scenario document could not be read or does not describe a valid
/// environment. The message names the offending field or position.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A function was evaluated outside the interval where it is defined
/// (e.g. the entropy derivative at the boundary of the belief interval).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The environment is valid but outside what the binary solvers handle.
class UnsupportedEnvironment : public Error {
 public:
  using Error::Error;
};

/// Root bracketing failed or a postcondition residual exceeded tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The shadow-price equation has a vanishing coefficient on gamma.
class NondegeneracyError : public Error {
 public:
  using Error::Error;
};

}  // namespace persuasion
