#pragma once

#include <stdexcept>
#include <string>

namespace hypbayes {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed configuration or argument combinations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Two fields that must share a mesh do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// Failure inside a forward solve. The sampler treats these as rejections.
class ForwardError : public Error {
 public:
  using Error::Error;
};

class NonFiniteValue : public ForwardError {
 public:
  using ForwardError::ForwardError;
};

class CflViolation : public ForwardError {
 public:
  CflViolation(const std::string& what, double admissible)
      : ForwardError(what), admissible_(admissible) {}
  /// Largest time step (or lambda) that would have been accepted.
  double admissible() const noexcept { return admissible_; }

 private:
  double admissible_;
};

class PositivityError : public ForwardError {
 public:
  using ForwardError::ForwardError;
};

class FluxInversionError : public ForwardError {
 public:
  FluxInversionError(const std::string& what, double lo_value, double hi_value)
      : ForwardError(what), lo_value_(lo_value), hi_value_(hi_value) {}
  /// Flux values attained at the ends of the bracket that was searched.
  double lo_value() const noexcept { return lo_value_; }
  double hi_value() const noexcept { return hi_value_; }

 private:
  double lo_value_;
  double hi_value_;
};

}  // namespace hypbayes
