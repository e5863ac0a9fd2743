#pragma once

#include <stdexcept>
#include <string>

namespace stablegen {

// Requested quantity is undefined in the mechanism's regime (e.g. the
// stationary Laplace transform in the critical case).
class UnsupportedRegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numeric evaluation produced a non-finite result; the message names the
// offending derivative order and evaluation point.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive quadrature did not reach the requested tolerance. Carries the
// best available estimate and its error bound.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate(estimate), error_bound(error_bound) {}

  double estimate;
  double error_bound;
};

// A thinning step proposed a rate above its dominating bound. This indicates
// a rate-table bug, not a recoverable condition.
class DominatingRateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace stablegen
