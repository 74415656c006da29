#pragma once

#include <stdexcept>
#include <string>

namespace caslayer {

// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments or precondition violations: bad dimensions, unphysical
// material parameters, unsupported material pairings, out-of-range indices.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A matrix inversion was rejected because the condition estimate exceeded the
// trust bound, or because the a*inv(a) residual check failed afterwards.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, double condition_estimate)
      : Error(what), cond_(condition_estimate) {}
  // Estimated condition number (norm_inf(a) * norm_inf(inv(a))) of the
  // offending matrix; infinity when the matrix is exactly singular.
  double condition_estimate() const noexcept { return cond_; }

 private:
  double cond_;
};

// A requested exponential would overflow double precision.
class OverflowError : public Error {
 public:
  OverflowError(const std::string& what, double exponent)
      : Error(what), exponent_(exponent) {}
  // The real part of the offending exponent.
  double exponent() const noexcept { return exponent_; }

 private:
  double exponent_;
};

// A computed quantity violated an exactness guarantee (for example a value
// that must be real came out with a large imaginary part). Indicates either
// corrupted inputs or a genuine numerical breakdown; never expected in
// normal operation.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace caslayer
