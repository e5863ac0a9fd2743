#pragma once

#include <cstdint>
#include <stdexcept>

#include "stablegen/derivative_table.hpp"
#include "stablegen/mechanism.hpp"

namespace stablegen {

// One transition-rate query of the ancestral process, at time distance t > 0
// from the observation level. Birth queries need m > n >= 0, death queries
// n > m >= 0.
struct RateQuery {
  std::int64_t n = 0;
  std::int64_t m = 0;
  double t = 1.0;
};

// Forward-in-time birth rate q^b_{n,m}(-t) of the ancestral count, general
// derivative form: (m+1)/(m+1-n)! * c(t)^{m-n} * |psi^{(m-n+1)}(c(t))|.
// Assembled in log space; 0 for b = 2 whenever m > n + 1.
double birth_rate(const StableMechanism& mech, const RateQuery& q);

// The same rate through the explicit stable expression
// (m+1)/(m-n+1)! * |b(b-1)...(b-m+n)| * alpha/(e^{(b-1)alpha t}-1);
// an independent algebraic route kept for cross-checking.
double birth_rate_explicit(const StableMechanism& mech, const RateQuery& q);

// Backward-in-time death rate
// q^d_{n,m}(t) = binom(n+1,m) |ubar^{(m)}(c)|/|ubar^{(n)}(c)| |psi^{(n-m+1)}(c)|
// evaluated through exact derivative tables in log space.
double death_rate(const StableMechanism& mech, const RateQuery& q);

// Sum of q^d_{n,m}(t) over m = 0..n-1.
double total_death_rate(const StableMechanism& mech, std::int64_t n, double t);

// b -> 1 limit of the death rate: (n+1)/((n+1-m)(n-m)) * 1/(gamma t).
double bs_limit_rate(std::int64_t n, std::int64_t m, double t, double gamma);

// alpha -> 0 limit of the birth rate (critical regime):
// (m+1)|b(b-2)...(b-m+n)|/(m-n+1)! * 1/t, degenerating to (n+2)/t (m = n+1)
// and 0 (m > n+1) when b = 2.
double critical_birth_rate(const StableMechanism& mech, const RateQuery& q);

// Quadratic-case marginal P(M^0_{-t} = n) = (n+1) e^{-alpha t n} (1-e^{-alpha t})^2.
double quadratic_marginal_pmf(const StableMechanism& mech, std::int64_t n, double t);

// One-time pgf E[x^{M^0_{-t}}] = ubar(c(t)(1-x)).
double marginal_pgf(const StableMechanism& mech, double x, double t);

// |R'(t)| = (b-1)alpha/(e^{(b-1)alpha t}-1): the density of GWI time with
// respect to calendar time. Differentiate R to obtain it; validated against
// finite differences in the tests.
double gwi_time_rate(const StableMechanism& mech, double t);

namespace detail {

// Joint pgf E[x^{M^0_{-r}} y^{M^0_{-s}}] for r >= s > 0, scalar-generic so it
// can be sampled on a complex polydisc for coefficient extraction.
template <class S>
S joint_pgf_kernel(const StableMechanism& mech, S x, S y, double r, double s) {
  const double cr = extinction_c(mech, r);
  const double cs = extinction_c(mech, s);
  const double h = r - s;
  const S z = cs * (S{1.0} - y);
  const S u = u_flow_of(mech, z, h);
  const S lambda0 = cr * (S{1.0} - x) + x * u;
  return ubar_of(mech, lambda0) * std::exp(mech.alpha * h) * psi_of(mech, u) / psi_of(mech, z);
}

}  // namespace detail

// Joint pgf oracle. The real overload takes the y -> 1 (and r = s) limits
// analytically so the marginal boundary is exact rather than 0/0.
double joint_pgf(const StableMechanism& mech, double x, double y, double r, double s);

template <class S>
S joint_pgf(const StableMechanism& mech, S x, S y, double r, double s) {
  if (r < s) {
    throw std::invalid_argument("joint_pgf: needs r >= s");
  }
  return detail::joint_pgf_kernel(mech, x, y, r, s);
}

}  // namespace stablegen
