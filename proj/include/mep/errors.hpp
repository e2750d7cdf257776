#pragma once

#include <stdexcept>
#include <string>

namespace mep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad call: wrong shapes, out-of-range options, wrong arity.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A product of dimensions exceeded the configured side cap.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A dense decomposition failed to converge, or a numerical procedure stalled.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed problem or parameter file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Polynomial problem of total degree > 2.
class UnsupportedDegreeError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

}  // namespace mep
