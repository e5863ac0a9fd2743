#include "stablegen/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "stablegen/errors.hpp"

namespace stablegen {

namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK constants).
constexpr double kKronrodX[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double integral;
  double error;
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kKronrodX[i];
    const double f_lo = f(center - dx);
    const double f_hi = (i == 7) ? 0.0 : f(center + dx);
    const double pair = (i == 7) ? f_lo : f_lo + f_hi;
    kronrod += kKronrodW[i] * pair;
    if (i % 2 == 1) {
      gauss += kGaussW[i / 2] * pair;  // odd Kronrod nodes carry the embedded Gauss rule
    }
  }
  kronrod *= half;
  gauss *= half;
  const double diff = std::fabs(kronrod - gauss);
  // QUADPACK error sharpening.
  const double error = diff == 0.0 ? 0.0 : diff * std::min(1.0, std::pow(200.0 * diff / std::max(std::fabs(kronrod), 1e-300), 1.5));
  return Panel{a, b, kronrod, std::max(error, diff * 1e-6)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureConfig& cfg,
                                    const std::function<void(double, double)>* node_sink) {
  QuadratureResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  auto worse = [](const Panel& lhs, const Panel& rhs) { return lhs.error < rhs.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> queue(worse);
  queue.push(evaluate_panel(f, a, b));
  double total = queue.top().integral;
  double total_error = queue.top().error;
  int splits = 0;
  while (splits < cfg.max_subdivisions &&
         total_error > std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total))) {
    Panel panel = queue.top();
    queue.pop();
    const double mid = 0.5 * (panel.a + panel.b);
    if (mid <= panel.a || mid >= panel.b) {
      // Panel is at floating-point resolution.
      queue.push(panel);
      break;
    }
    Panel left = evaluate_panel(f, panel.a, mid);
    Panel right = evaluate_panel(f, mid, panel.b);
    total += left.integral + right.integral - panel.integral;
    total_error += left.error + right.error - panel.error;
    queue.push(left);
    queue.push(right);
    ++splits;
  }
  result.value = total;
  result.error_bound = total_error;
  result.subdivisions = splits;
  result.converged = total_error <= std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total));
  if (node_sink != nullptr) {
    std::vector<Panel> panels;
    panels.reserve(queue.size());
    while (!queue.empty()) {
      panels.push_back(queue.top());
      queue.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const Panel& lhs, const Panel& rhs) { return lhs.a < rhs.a; });
    for (const Panel& panel : panels) {
      const double center = 0.5 * (panel.a + panel.b);
      const double half = 0.5 * (panel.b - panel.a);
      for (int i = 0; i < 8; ++i) {
        const double dx = half * kKronrodX[i];
        (*node_sink)(center - dx, kKronrodW[i] * half);
        if (i != 7) {
          (*node_sink)(center + dx, kKronrodW[i] * half);
        }
      }
    }
  }
  return result;
}

QuadratureResult integrate_geometric(const std::function<double(double)>& f, double a, double b,
                                     double first_width, double growth,
                                     const QuadratureConfig& cfg,
                                     const std::function<void(double, double)>* node_sink) {
  if (!(first_width > 0.0) || !(growth > 1.0) || !(b > a)) {
    throw std::invalid_argument("integrate_geometric: bad panel parameters");
  }
  int panel_count = 1;
  for (double width = first_width, hi = a + first_width; hi < b; width *= growth, hi += width) {
    ++panel_count;
  }
  QuadratureConfig panel_cfg = cfg;
  panel_cfg.abs_tol = cfg.abs_tol / panel_count;
  QuadratureResult total;
  total.converged = true;
  double lo = a;
  double width = first_width;
  while (lo < b) {
    const double hi = std::min(b, lo + width);
    const QuadratureResult panel = integrate_adaptive(f, lo, hi, panel_cfg, node_sink);
    total.value += panel.value;
    total.error_bound += panel.error_bound;
    total.subdivisions += panel.subdivisions;
    total.converged = total.converged && panel.converged;
    lo = hi;
    width *= growth;
  }
  return total;
}

double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          const QuadratureConfig& cfg, double* error_bound) {
  const QuadratureResult result = integrate_adaptive(f, a, b, cfg);
  if (!result.converged) {
    throw QuadratureError("quadrature did not converge within " +
                              std::to_string(cfg.max_subdivisions) + " subdivisions",
                          result.value, result.error_bound);
  }
  if (error_bound != nullptr) {
    *error_bound = result.error_bound;
  }
  return result.value;
}

}  // namespace stablegen
