#pragma once

#include <stdexcept>
#include <string>

namespace pdmp {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A rotation was requested relative to (or through) the antipode of the
/// identity, where the logarithmic map is undefined.
class AntipodalError : public Error {
 public:
  using Error::Error;
};

/// A tangent vector left the ball ||zeta|| < pi where Exp is bijective.
class DomainError : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Some kernel saw (almost) no activation in the training data.
class InsufficientCoverage : public Error {
 public:
  using Error::Error;
};

class StepTooLarge : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV / model document, or a sample too far from unit norm.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace pdmp
