#pragma once

#include <stdexcept>
#include <string>

namespace tomosc {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Precondition or type-invariant violation (bad argument, inconsistent grid, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested at or across a focusing singularity of the kernel
/// (|sin t| below the caustic tolerance, or t outside the direct-evaluation window).
class CausticError : public Error {
 public:
  using Error::Error;
};

/// A grid is too coarse or too small for the requested operation.
class GridError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
/// Carries the best value obtained and the achieved error estimate.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& msg, double value, double achieved)
      : Error(msg), value_(value), achieved_(achieved) {}
  double value() const { return value_; }
  double achieved_error() const { return achieved_; }

 private:
  double value_;
  double achieved_;
};

/// Scenario configuration problem (missing key, bad type, inconsistent request).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tomosc
