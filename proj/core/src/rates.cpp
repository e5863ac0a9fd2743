#include "stablegen/rates.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "stablegen/errors.hpp"

namespace stablegen {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_birth_query(const RateQuery& q) {
  if (!(q.m > q.n && q.n >= 0)) {
    throw std::invalid_argument("birth rate: need m > n >= 0");
  }
  if (!(q.t > 0.0)) {
    throw std::invalid_argument("birth rate: need t > 0");
  }
}

void check_death_query(const RateQuery& q) {
  if (!(q.n > q.m && q.m >= 0)) {
    throw std::invalid_argument("death rate: need n > m >= 0");
  }
  if (!(q.t > 0.0)) {
    throw std::invalid_argument("death rate: need t > 0");
  }
}

void require_sub_critical(const StableMechanism& mech, const char* what) {
  if (mech.regime != Regime::SubCritical) {
    throw UnsupportedRegimeError(std::string(what) + " needs a sub-critical mechanism");
  }
}

double log_factorial(std::int64_t n) {
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(std::int64_t n, std::int64_t k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// log of |b (b-1) ... (b-k+1)|, the k-factor falling product; -inf if a
// factor vanishes (b = 2, k >= 3).
double log_abs_falling(double b, std::int64_t k) {
  double sum = 0.0;
  for (std::int64_t i = 0; i < k; ++i) {
    const double factor = b - static_cast<double>(i);
    if (factor == 0.0) {
      return kNegInf;
    }
    sum += std::log(std::fabs(factor));
  }
  return sum;
}

}  // namespace

double birth_rate(const StableMechanism& mech, const RateQuery& q) {
  check_birth_query(q);
  require_sub_critical(mech, "birth_rate");
  const double log_c = log_extinction_c(mech, q.t);
  const std::int64_t j = q.m - q.n;  // jump size; psi order j+1 >= 2
  const double log_psi = log_abs_psi_derivative(mech, static_cast<int>(j + 1), log_c);
  if (log_psi == kNegInf) {
    return 0.0;
  }
  const double log_rate = std::log(static_cast<double>(q.m + 1)) - log_factorial(j + 1) +
                          static_cast<double>(j) * log_c + log_psi;
  return std::exp(log_rate);
}

double birth_rate_explicit(const StableMechanism& mech, const RateQuery& q) {
  check_birth_query(q);
  require_sub_critical(mech, "birth_rate_explicit");
  const std::int64_t j = q.m - q.n;
  const double log_falling = log_abs_falling(mech.b, j + 1);
  if (log_falling == kNegInf) {
    return 0.0;
  }
  const double log_time = std::log(mech.alpha) - detail::log_expm1(mech.eta() * mech.alpha * q.t);
  return std::exp(std::log(static_cast<double>(q.m + 1)) - log_factorial(j + 1) + log_falling +
                  log_time);
}

double death_rate(const StableMechanism& mech, const RateQuery& q) {
  check_death_query(q);
  require_sub_critical(mech, "death_rate");
  const double log_c = log_extinction_c(mech, q.t);
  const std::int64_t k = q.n - q.m + 1;  // psi order, >= 2
  const double log_psi = log_abs_psi_derivative(mech, static_cast<int>(k), log_c);
  if (log_psi == kNegInf) {
    return 0.0;
  }
  const auto numerator = DerivativeTable::for_ubar(mech, static_cast<int>(q.m));
  const auto denominator = DerivativeTable::for_ubar(mech, static_cast<int>(q.n));
  const double log_rate = log_binomial(q.n + 1, q.m) + numerator.log_abs_eval(log_c) -
                          denominator.log_abs_eval(log_c) + log_psi;
  const double rate = std::exp(log_rate);
  if (!std::isfinite(rate)) {
    throw EvaluationError("death_rate: non-finite value at n=" + std::to_string(q.n) +
                          " m=" + std::to_string(q.m) + " log c=" + std::to_string(log_c));
  }
  return rate;
}

double total_death_rate(const StableMechanism& mech, std::int64_t n, double t) {
  double sum = 0.0;
  for (std::int64_t m = 0; m < n; ++m) {
    sum += death_rate(mech, RateQuery{n, m, t});
  }
  return sum;
}

double bs_limit_rate(std::int64_t n, std::int64_t m, double t, double gamma) {
  if (!(n > m && m >= 0)) {
    throw std::invalid_argument("bs_limit_rate: need n > m >= 0");
  }
  if (!(t > 0.0) || !(gamma > 0.0)) {
    throw std::invalid_argument("bs_limit_rate: need t > 0 and gamma > 0");
  }
  return static_cast<double>(n + 1) /
         (static_cast<double>(n + 1 - m) * static_cast<double>(n - m) * gamma * t);
}

double critical_birth_rate(const StableMechanism& mech, const RateQuery& q) {
  check_birth_query(q);
  if (mech.regime != Regime::Critical) {
    throw UnsupportedRegimeError("critical_birth_rate needs a critical mechanism");
  }
  const std::int64_t j = q.m - q.n;
  // |b (b-2) (b-3) ... (b-j)|: the (b-1) factor cancels against the alpha -> 0
  // time scaling, so it is absent here.
  double log_product = std::log(mech.b);
  for (std::int64_t i = 2; i <= j; ++i) {
    const double factor = mech.b - static_cast<double>(i);
    if (factor == 0.0) {
      return 0.0;
    }
    log_product += std::log(std::fabs(factor));
  }
  return std::exp(std::log(static_cast<double>(q.m + 1)) + log_product - log_factorial(j + 1) -
                  std::log(q.t));
}

double quadratic_marginal_pmf(const StableMechanism& mech, std::int64_t n, double t) {
  require_sub_critical(mech, "quadratic_marginal_pmf");
  if (!mech.quadratic()) {
    throw UnsupportedRegimeError("quadratic_marginal_pmf: closed form exists for b = 2 only");
  }
  if (n < 0 || !(t > 0.0)) {
    throw std::invalid_argument("quadratic_marginal_pmf: need n >= 0 and t > 0");
  }
  const double decay = std::expm1(-mech.alpha * t);  // e^{-alpha t} - 1
  return static_cast<double>(n + 1) * std::exp(-mech.alpha * t * static_cast<double>(n)) * decay *
         decay;
}

double marginal_pgf(const StableMechanism& mech, double x, double t) {
  require_sub_critical(mech, "marginal_pgf");
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("marginal_pgf: x must lie in [0, 1]");
  }
  return ubar(mech, extinction_c(mech, t) * (1.0 - x));
}

double gwi_time_rate(const StableMechanism& mech, double t) {
  require_sub_critical(mech, "gwi_time_rate");
  if (!(t > 0.0)) {
    throw std::invalid_argument("gwi_time_rate: t must be positive");
  }
  const double x = mech.eta() * mech.alpha * t;
  return std::exp(std::log(mech.eta() * mech.alpha) - detail::log_expm1(x));
}

double joint_pgf(const StableMechanism& mech, double x, double y, double r, double s) {
  require_sub_critical(mech, "joint_pgf");
  if (r < s || !(s > 0.0)) {
    throw std::invalid_argument("joint_pgf: needs r >= s > 0");
  }
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
    throw std::invalid_argument("joint_pgf: x, y must lie in [0, 1]");
  }
  if (y == 1.0) {
    // psi(u(0,h))/psi(0) -> e^{-alpha h} cancels the e^{alpha h} prefactor,
    // leaving the one-time marginal in x.
    return ubar(mech, extinction_c(mech, r) * (1.0 - x));
  }
  return detail::joint_pgf_kernel(mech, x, y, r, s);
}

}  // namespace stablegen
