#pragma once

#include <stdexcept>
#include <string>

namespace clusterlab {

// Every failure raised by the library derives from Error. The CLI maps the
// category to an exit code, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration: bad dimension, band outside its admissible regime.
class InvalidConfigError : public Error {
 public:
  using Error::Error;
};

/// Input outside the exactly representable range (e.g. |k|^2 overflow).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A supplied object fails its invariant check (non-orthonormal frame, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Mismatched lengths between related inputs.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function (p < 2, q < 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or eigensolver did not reach the requested accuracy.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Problem size exceeds a configured cap (dense eigensolver, oracle cube).
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace clusterlab
