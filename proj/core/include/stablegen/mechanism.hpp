#pragma once

#include <cmath>
#include <cstdint>

#include "stablegen/errors.hpp"

namespace stablegen {

enum class Regime { SubCritical, Critical };

// Stable branching mechanism psi(x) = alpha*x + gamma*x^b with the matched
// immigration phi = psi' - alpha. Every deterministic quantity in the library
// derives from these three parameters. alpha > 0 in the sub-critical regime,
// alpha == 0 in the critical one; gamma > 0 and b in (1, 2].
struct StableMechanism {
  double alpha = 1.0;
  double gamma = 1.0;
  double b = 2.0;
  Regime regime = Regime::SubCritical;

  static StableMechanism sub_critical(double alpha, double gamma, double b);
  static StableMechanism critical(double gamma, double b);

  // eta = b - 1, the stable subordinator index.
  double eta() const { return b - 1.0; }
  // a = gamma / alpha; defined in the sub-critical regime only.
  double a() const;
  bool quadratic() const { return b == 2.0; }
  bool sub_critical_regime() const { return regime == Regime::SubCritical; }

  void validate() const;
};

namespace detail {

// log(1 + e^x) without overflow.
inline double log1p_exp(double x) {
  return x > 36.0 ? x : std::log1p(std::exp(x));
}

// log(e^x - 1) for x > 0 without overflow.
inline double log_expm1(double x) {
  return x > 36.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
}

// Scalar-generic kernels; S is double or std::complex<double>. They let the
// generating-function oracles run on a complex circle for coefficient
// extraction.
template <class S>
S psi_of(const StableMechanism& mech, S lambda) {
  using std::pow;
  return mech.alpha * lambda + mech.gamma * pow(lambda, mech.b);
}

template <class S>
S ubar_of(const StableMechanism& mech, S lambda) {
  using std::pow;
  const double eta = mech.eta();
  return pow(S{1.0} + mech.a() * pow(lambda, eta), -mech.b / eta);
}

template <class S>
S u_flow_of(const StableMechanism& mech, S lambda, double t) {
  using std::pow;
  const double eta = mech.eta();
  if (mech.regime == Regime::SubCritical) {
    const double shrink = -std::expm1(-mech.alpha * eta * t);  // 1 - e^{-alpha*eta*t}
    const S root = S{1.0} + (mech.gamma / mech.alpha) * shrink * pow(lambda, eta);
    return std::exp(-mech.alpha * t) * lambda * pow(root, -1.0 / eta);
  }
  const S root = S{1.0} + mech.gamma * eta * t * pow(lambda, eta);
  return lambda * pow(root, -1.0 / eta);
}

}  // namespace detail

// psi(lambda) = alpha*lambda + gamma*lambda^b.
double psi(const StableMechanism& mech, double lambda);

// k-th derivative of psi, k >= 1. For b = 2 and k >= 3 this is exactly 0.
double psi_derivative(const StableMechanism& mech, int k, double lambda);

// log |psi^{(k)}(lambda)| for k >= 2 given log(lambda); -infinity when the
// derivative vanishes identically (b = 2, k >= 3).
double log_abs_psi_derivative(const StableMechanism& mech, int k, double log_lambda);

// Immigration mechanism phi(lambda) = b*gamma*lambda^{b-1}.
double phi(const StableMechanism& mech, double lambda);

// Non-extinction intensity c(t) under the canonical measure; strictly
// decreasing, blows up as t -> 0+. Computed through log space so the b -> 1
// regime (where c overflows any double) still evaluates.
double extinction_c(const StableMechanism& mech, double t);
double log_extinction_c(const StableMechanism& mech, double t);

// Inverse of extinction_c by bisection on the monotone map, relative
// tolerance 1e-12.
double extinction_c_inverse(const StableMechanism& mech, double lambda);

// The flow u(lambda, t): Laplace exponent of the CB semigroup. Satisfies
// u(lambda, 0) = lambda and u(u(lambda, s), t) = u(lambda, s + t).
double u_flow(const StableMechanism& mech, double lambda, double t);

// Stationary Laplace transform ubar(lambda) = (1 + a*lambda^{b-1})^{-b/(b-1)}
// (sub-critical regime only).
double ubar(const StableMechanism& mech, double lambda);
double log_ubar(const StableMechanism& mech, double lambda);

// kappa = (alpha/gamma)^{1/(b-1)} = lim_{t->inf} c(t) e^{alpha t}.
double kappa(const StableMechanism& mech);

// GWI time change: R(t) = log(e^{(b-1)alpha t} / (e^{(b-1)alpha t} - 1)),
// a decreasing bijection of (0, inf); R_inv is its inverse. The ancestral
// calendar time of GWI time s is -R_inv(s).
double time_change_R(const StableMechanism& mech, double t);
double time_change_R_inv(const StableMechanism& mech, double u);

// Offspring pgf g_B(r) = (b r - 1 + (1-r)^b)/(b-1), support {2, 3, ...}.
double g_B(const StableMechanism& mech, double r);
// Immigrant-count pgf g_I(r) = 1 - (1-r)^{b-1}, support {1, 2, ...}.
double g_I(const StableMechanism& mech, double r);
// Jump-size mixture at state k: convex combination of g_B and g_I with
// weights k(b-1)/(k(b-1)+b) and b/(k(b-1)+b).
double g_K(const StableMechanism& mech, std::int64_t k, double r);

// p_n = (-1)^n binom(b, n)/(b-1) for n >= 2, via the ratio recurrence
// p_{n+1} = p_n (n-b)/(n+1) from p_2 = b/2; p_0 = p_1 = 0.
double offspring_pmf(const StableMechanism& mech, std::int64_t n);
// q_n = (-1)^{n+1} binom(b-1, n) for n >= 1, via q_{n+1} = q_n (n-(b-1))/(n+1)
// from q_1 = b-1; q_0 = 0.
double immigration_pmf(const StableMechanism& mech, std::int64_t n);

}  // namespace stablegen
