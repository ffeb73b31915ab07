#pragma once

#include <stdexcept>
#include <string>

namespace cpspdc {

/// Base class for every error raised by the library. The CLI maps the
/// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (crystal file, sweep spec, JSA file).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input parsed but violates an invariant (missing axis, bad range, N < 2, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Wavelength outside a dispersion model's validity range.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Lookup of a crystal that is not in the database.
class UnknownCrystalError : public ValidationError {
 public:
  explicit UnknownCrystalError(const std::string& name)
      : ValidationError("unknown crystal '" + name + "'") {}
};

/// Root bracketing or iteration failure, impossible phase matching.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// A computed spectrum or curve runs into the edge of its sampling grid.
class GridBoundaryError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cpspdc
