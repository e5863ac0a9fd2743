#include "stablegen/mechanism.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace stablegen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) {
    throw std::domain_error(what);
  }
}

}  // namespace

StableMechanism StableMechanism::sub_critical(double alpha, double gamma, double b) {
  StableMechanism mech{alpha, gamma, b, Regime::SubCritical};
  mech.validate();
  return mech;
}

StableMechanism StableMechanism::critical(double gamma, double b) {
  StableMechanism mech{0.0, gamma, b, Regime::Critical};
  mech.validate();
  return mech;
}

double StableMechanism::a() const {
  if (regime != Regime::SubCritical) {
    throw UnsupportedRegimeError("a = gamma/alpha is defined in the sub-critical regime only");
  }
  return gamma / alpha;
}

void StableMechanism::validate() const {
  require(gamma > 0.0, "mechanism: gamma must be positive");
  require(b > 1.0 && b <= 2.0, "mechanism: b must lie in (1, 2]");
  if (regime == Regime::SubCritical) {
    require(alpha > 0.0, "mechanism: sub-critical regime requires alpha > 0");
  } else {
    require(alpha == 0.0, "mechanism: critical regime requires alpha == 0");
  }
}

double psi(const StableMechanism& mech, double lambda) {
  require(lambda >= 0.0, "psi: lambda must be nonnegative");
  return mech.alpha * lambda + mech.gamma * std::pow(lambda, mech.b);
}

double psi_derivative(const StableMechanism& mech, int k, double lambda) {
  require(k >= 1, "psi_derivative: k must be >= 1");
  require(lambda >= 0.0, "psi_derivative: lambda must be nonnegative");
  const double b = mech.b;
  if (k == 1) {
    return mech.alpha + mech.gamma * b * std::pow(lambda, b - 1.0);
  }
  double falling = 1.0;
  for (int i = 0; i < k; ++i) {
    falling *= b - i;
  }
  if (falling == 0.0) {
    return 0.0;  // b == 2, k >= 3: the polynomial terminates
  }
  require(lambda > 0.0, "psi_derivative: lambda must be positive for k >= 2 and b < 2");
  return mech.gamma * falling * std::pow(lambda, b - k);
}

double log_abs_psi_derivative(const StableMechanism& mech, int k, double log_lambda) {
  require(k >= 2, "log_abs_psi_derivative: k must be >= 2");
  const double b = mech.b;
  double log_falling = 0.0;
  for (int i = 0; i < k; ++i) {
    const double factor = b - i;
    if (factor == 0.0) {
      return -kInf;
    }
    log_falling += std::log(std::fabs(factor));
  }
  return std::log(mech.gamma) + log_falling + (b - k) * log_lambda;
}

double phi(const StableMechanism& mech, double lambda) {
  require(lambda >= 0.0, "phi: lambda must be nonnegative");
  return mech.b * mech.gamma * std::pow(lambda, mech.b - 1.0);
}

double log_extinction_c(const StableMechanism& mech, double t) {
  require(t > 0.0, "extinction_c: t must be positive");
  const double eta = mech.eta();
  if (mech.regime == Regime::SubCritical) {
    return (std::log(mech.alpha / mech.gamma) - detail::log_expm1(eta * mech.alpha * t)) / eta;
  }
  return -std::log(mech.gamma * eta * t) / eta;
}

double extinction_c(const StableMechanism& mech, double t) {
  return std::exp(log_extinction_c(mech, t));
}

double extinction_c_inverse(const StableMechanism& mech, double lambda) {
  require(lambda > 0.0, "extinction_c_inverse: lambda must be positive");
  // c is strictly decreasing, so bracket and bisect on log c.
  const double target = std::log(lambda);
  double lo = 1.0, hi = 1.0;
  while (log_extinction_c(mech, lo) < target) {
    lo *= 0.5;
    require(lo > 1e-300, "extinction_c_inverse: bracketing failed");
  }
  while (log_extinction_c(mech, hi) > target) {
    hi *= 2.0;
    require(hi < 1e300, "extinction_c_inverse: bracketing failed");
  }
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-12 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (log_extinction_c(mech, mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double u_flow(const StableMechanism& mech, double lambda, double t) {
  require(lambda >= 0.0, "u_flow: lambda must be nonnegative");
  require(t >= 0.0, "u_flow: t must be nonnegative");
  if (lambda == 0.0) {
    return 0.0;
  }
  return detail::u_flow_of(mech, lambda, t);
}

double log_ubar(const StableMechanism& mech, double lambda) {
  if (mech.regime != Regime::SubCritical) {
    throw UnsupportedRegimeError("ubar: the stationary Laplace transform needs a sub-critical mechanism");
  }
  require(lambda >= 0.0, "ubar: lambda must be nonnegative");
  if (lambda == 0.0) {
    return 0.0;
  }
  const double eta = mech.eta();
  const double x = std::log(mech.a()) + eta * std::log(lambda);
  return -(mech.b / eta) * detail::log1p_exp(x);
}

double ubar(const StableMechanism& mech, double lambda) {
  return std::exp(log_ubar(mech, lambda));
}

double kappa(const StableMechanism& mech) {
  if (mech.regime != Regime::SubCritical) {
    throw UnsupportedRegimeError("kappa is defined in the sub-critical regime only");
  }
  return std::pow(mech.alpha / mech.gamma, 1.0 / mech.eta());
}

double time_change_R(const StableMechanism& mech, double t) {
  if (mech.regime != Regime::SubCritical) {
    throw UnsupportedRegimeError("time_change_R needs a sub-critical mechanism");
  }
  require(t > 0.0, "time_change_R: t must be positive");
  return -std::log1p(-std::exp(-mech.eta() * mech.alpha * t));
}

double time_change_R_inv(const StableMechanism& mech, double u) {
  if (mech.regime != Regime::SubCritical) {
    throw UnsupportedRegimeError("time_change_R_inv needs a sub-critical mechanism");
  }
  require(u > 0.0, "time_change_R_inv: argument must be positive");
  return -std::log1p(-std::exp(-u)) / (mech.eta() * mech.alpha);
}

double g_B(const StableMechanism& mech, double r) {
  require(r >= 0.0 && r <= 1.0, "g_B: r must lie in [0, 1]");
  const double w = 1.0 - r;
  // (b r - 1 + w^b)/(b-1) rewritten to stay stable near r = 1.
  return 1.0 - (mech.b * w - std::pow(w, mech.b)) / (mech.b - 1.0);
}

double g_I(const StableMechanism& mech, double r) {
  require(r >= 0.0 && r <= 1.0, "g_I: r must lie in [0, 1]");
  return 1.0 - std::pow(1.0 - r, mech.b - 1.0);
}

double g_K(const StableMechanism& mech, std::int64_t k, double r) {
  require(k >= 0, "g_K: k must be nonnegative");
  const double eta = mech.eta();
  const double weight_branch = static_cast<double>(k) * eta / (static_cast<double>(k) * eta + mech.b);
  return weight_branch * g_B(mech, r) + (1.0 - weight_branch) * g_I(mech, r);
}

double offspring_pmf(const StableMechanism& mech, std::int64_t n) {
  require(n >= 0, "offspring_pmf: n must be nonnegative");
  if (n < 2) {
    return 0.0;
  }
  double p = mech.b / 2.0;
  for (std::int64_t j = 2; j < n; ++j) {
    p *= (static_cast<double>(j) - mech.b) / static_cast<double>(j + 1);
  }
  return p;
}

double immigration_pmf(const StableMechanism& mech, std::int64_t n) {
  require(n >= 0, "immigration_pmf: n must be nonnegative");
  if (n < 1) {
    return 0.0;
  }
  const double eta = mech.eta();
  double q = eta;
  for (std::int64_t j = 1; j < n; ++j) {
    q *= (static_cast<double>(j) - eta) / static_cast<double>(j + 1);
  }
  return q;
}

}  // namespace stablegen
