#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace adelim {

/// A bound formula was queried outside its validity domain (nonpositive
/// denominator). The bound is meaningless there; we refuse to return it.
class BoundInvalidError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A stated precondition does not hold. The message names the violated
/// inequality.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bad grid, descriptor, or parameter combination.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Expansion order outside the supported range.
class UnsupportedOrderError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The drift matrix is not Hurwitz for the given parameters.
class NoSteadyStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature exhausted its subdivision budget. Carries the best
/// estimate and its error bound so callers can decide what to do with it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::complex<double> estimate,
                   double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  std::complex<double> estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  std::complex<double> estimate_;
  double error_bound_;
};

}  // namespace adelim
