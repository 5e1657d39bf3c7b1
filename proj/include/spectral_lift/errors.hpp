#pragma once

#include <stdexcept>
#include <string>

namespace spectral_lift {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A value fell outside the domain an operation is defined on.
/// `value()` carries the offending number (an eigenvalue, a parameter, ...).
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double value) : Error(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

class EnumerationOverflow : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Fredholm-module axiom residual above tolerance.
class AxiomViolation : public Error {
 public:
  AxiomViolation(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Every generator commutes with F; the module carries no metric information.
class DegenerateModule : public Error {
 public:
  using Error::Error;
};

/// A check that is a theorem failed numerically, or a construction could not
/// produce a required positive constant.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace spectral_lift
