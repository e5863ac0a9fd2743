#pragma once

#include <functional>

namespace stablegen {

struct QuadratureConfig {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  int max_subdivisions = 4000;
  // Upper cutoff used by improper-integral wrappers; 0 means the operation
  // chooses its own point from an analytic tail bound.
  double truncation_point = 0.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error_bound = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

// Globally adaptive Gauss-Kronrod 15(7) on [a, b]: repeatedly bisects the
// panel with the largest error estimate until the summed estimate meets
// max(abs_tol, rel_tol * |value|) or max_subdivisions is spent.
// node_sink, when nonnull, receives the (x, weight) pairs of every panel in
// the final partition, so callers can re-integrate per-sample integrands on
// the same nodes.
QuadratureResult integrate_adaptive(
    const std::function<double(double)>& f, double a, double b, const QuadratureConfig& cfg,
    const std::function<void(double, double)>* node_sink = nullptr);

// As above but throws QuadratureError (carrying the best estimate and bound)
// when the tolerance is not reached.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          const QuadratureConfig& cfg, double* error_bound = nullptr);

// Integrates over [a, b] presplit into geometrically growing panels (factor
// `growth` starting from width `first_width`), each panel adaptively refined.
// Needed when b/a spans many decades: a single root panel would hide the
// sharply localized mass from the error estimator.
QuadratureResult integrate_geometric(
    const std::function<double(double)>& f, double a, double b, double first_width,
    double growth, const QuadratureConfig& cfg,
    const std::function<void(double, double)>* node_sink = nullptr);

}  // namespace stablegen
