#include "stablegen/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stablegen/derivative_table.hpp"
#include "stablegen/errors.hpp"

namespace stablegen {

namespace {

constexpr double kPi = 3.14159265358979323846;

double acot(double x) {
  return kPi / 2.0 - std::atan(x);
}

struct LinnikKernel {
  double a;
  double b;
  double cot_pia;
  double inv_sin_pia;
  double cos_pia;

  LinnikKernel(double a_param, double b_param) : a(a_param), b(b_param) {
    if (!(a > 0.0 && a < 1.0)) {
      throw std::domain_error("linnik: the stable parameter must lie in (0, 1)");
    }
    if (!(b > 0.0)) {
      throw std::domain_error("linnik: the order parameter must be positive");
    }
    cot_pia = std::cos(kPi * a) / std::sin(kPi * a);
    inv_sin_pia = 1.0 / std::sin(kPi * a);
    cos_pia = std::cos(kPi * a);
  }

  double F(double y) const {
    return 1.0 - acot(cot_pia + std::pow(y, a) * inv_sin_pia) / (kPi * a);
  }

  // [y^{2a} + 2 y^a cos(a pi) + 1]^{power}
  double denominator(double y, double power) const {
    const double ya = std::pow(y, a);
    return std::pow(ya * ya + 2.0 * ya * cos_pia + 1.0, power);
  }

  // sup over y of 1/denominator comes from y^{2a}+2y^a cos+1 >= sin^2(a pi).
  double envelope(double power) const {
    return std::pow(std::sin(kPi * a), -2.0 * power);
  }
};

}  // namespace

IntegralEstimate linnik_density_estimate(double a_param, double b_param, double z,
                                         const QuadratureConfig& cfg) {
  if (!(z > 0.0)) {
    throw std::domain_error("linnik_density: z must be positive");
  }
  const LinnikKernel kernel(a_param, b_param);
  const double power = b_param / (2.0 * a_param);
  const double envelope = kernel.envelope(power) / kPi;
  // Beyond y_hi the integrand is below envelope * e^{-z y}.
  const double half_tol = std::max(cfg.abs_tol, 1e-12) / 2.0;
  double y_hi = cfg.truncation_point;
  if (y_hi <= 0.0) {
    y_hi = std::max(10.0 / z, (std::log(envelope / (half_tol * z)) + 1.0) / z);
  }
  const double tail_bound = envelope * std::exp(-z * y_hi) / z;
  auto integrand = [&](double y) {
    if (y <= 0.0) {
      return 0.0;
    }
    return std::exp(-z * y) * std::sin(kPi * b_param * kernel.F(y)) /
           kernel.denominator(y, power) / kPi;
  };
  // Geometric panels scaled to the e^{-zy} spike keep the mass visible to the
  // error estimator for every z.
  const QuadratureResult quad =
      integrate_geometric(integrand, 0.0, y_hi, std::min(1.0, 1.0 / z), 2.0, cfg);
  if (!quad.converged) {
    throw QuadratureError("linnik_density: quadrature did not converge", quad.value,
                          quad.error_bound + tail_bound);
  }
  return {quad.value, quad.error_bound + tail_bound};
}

double linnik_density(double a_param, double b_param, double z, const QuadratureConfig& cfg) {
  return linnik_density_estimate(a_param, b_param, z, cfg).value;
}

IntegralEstimate linnik_density_alt_estimate(double a_param, double z,
                                             const QuadratureConfig& cfg) {
  if (!(z > 0.0)) {
    throw std::domain_error("linnik_density_alt: z must be positive");
  }
  const LinnikKernel kernel(a_param, 1.0);
  const double power = 1.0 / (2.0 * a_param);
  const double envelope = kernel.envelope(power) / kPi;
  const double half_tol = std::max(cfg.abs_tol, 1e-12) / 2.0;
  double w_hi = cfg.truncation_point;
  if (w_hi <= 0.0) {
    w_hi = std::max(10.0 / z, (std::log(envelope * std::max(z, 1.0) / half_tol) + 1.0) / z);
  }
  const double tail_bound = envelope * std::exp(-z * w_hi);
  // f_{a,a+1}(z) = -z d/dz f_{a,1}(z) with the derivative taken under the
  // integral sign, then w = 1/y.
  auto integrand = [&](double w) {
    if (w <= 0.0) {
      return 0.0;
    }
    const double y = 1.0 / w;
    const double delta =
        std::sin(kPi * (1.0 - kernel.F(y))) / kernel.denominator(y, power) / kPi;
    return z * std::exp(-z * w) * delta;
  };
  const QuadratureResult quad =
      integrate_geometric(integrand, 0.0, w_hi, std::min(1.0, 1.0 / z), 2.0, cfg);
  if (!quad.converged) {
    throw QuadratureError("linnik_density_alt: quadrature did not converge", quad.value,
                          quad.error_bound + tail_bound);
  }
  return {quad.value, quad.error_bound + tail_bound};
}

double linnik_density_alt(double a_param, double z, const QuadratureConfig& cfg) {
  return linnik_density_alt_estimate(a_param, z, cfg).value;
}

IntegralEstimate linnik_mass(double a_param, double b_param, double z_hi,
                             const QuadratureConfig& cfg) {
  QuadratureConfig inner = cfg;
  inner.abs_tol = cfg.abs_tol / 10.0;
  inner.truncation_point = 0.0;
  auto density = [&](double z) {
    if (z <= 0.0) {
      return 0.0;
    }
    return linnik_density_estimate(a_param, b_param, z, inner).value;
  };
  // The inner quadrature error integrates against the same final nodes.
  double inner_error = 0.0;
  std::function<void(double, double)> sink = [&](double z, double w) {
    if (z > 0.0) {
      inner_error += w * linnik_density_estimate(a_param, b_param, z, inner).error_bound;
    }
  };
  const QuadratureResult quad = integrate_geometric(density, 0.0, z_hi, 1.0, 2.0, cfg, &sink);
  if (!quad.converged) {
    throw QuadratureError("linnik_mass: quadrature did not converge", quad.value,
                          quad.error_bound);
  }
  return {quad.value, quad.error_bound + inner_error};
}

IntegralEstimate linnik_laplace(double a_param, double b_param, double lambda,
                                const QuadratureConfig& cfg) {
  if (!(lambda > 0.0)) {
    throw std::domain_error("linnik_laplace: lambda must be positive");
  }
  QuadratureConfig inner = cfg;
  inner.abs_tol = cfg.abs_tol / 10.0;
  inner.truncation_point = 0.0;
  const LinnikKernel kernel(a_param, b_param);
  const double envelope = kernel.envelope(b_param / (2.0 * a_param)) / kPi;
  const double half_tol = std::max(cfg.abs_tol, 1e-12) / 2.0;
  // f(z) <= envelope / z, so e^{-lambda z} f(z) has tail <= envelope
  // * e^{-lambda Z}/(lambda Z).
  double z_hi = std::max(20.0 / lambda, 1.0);
  while (envelope * std::exp(-lambda * z_hi) / (lambda * z_hi) > half_tol) {
    z_hi *= 2.0;
  }
  double accumulated_inner_error = 0.0;
  auto integrand = [&](double z) {
    if (z <= 0.0) {
      return 0.0;
    }
    const IntegralEstimate est = linnik_density_estimate(a_param, b_param, z, inner);
    accumulated_inner_error = std::max(accumulated_inner_error, est.error_bound);
    return std::exp(-lambda * z) * est.value;
  };
  const QuadratureResult quad = integrate_adaptive(integrand, 0.0, z_hi, cfg);
  if (!quad.converged) {
    throw QuadratureError("linnik_laplace: quadrature did not converge", quad.value,
                          quad.error_bound);
  }
  const double tail = envelope * std::exp(-lambda * z_hi) / (lambda * z_hi);
  return {quad.value, quad.error_bound + tail + accumulated_inner_error / lambda};
}

double linnik_tail_estimate(double a_param, double b_param, double z) {
  return (b_param / a_param) * std::pow(z, -a_param) / std::tgamma(1.0 - a_param);
}

McEstimate intensity_g(const StableMechanism& mech, double x, int mc_samples, Rng& rng) {
  if (!(x > 0.0)) {
    throw std::domain_error("intensity_g: x must be positive");
  }
  if (mc_samples < 1) {
    throw std::invalid_argument("intensity_g: mc_samples must be >= 1");
  }
  if (mech.regime != Regime::SubCritical) {
    throw UnsupportedRegimeError("intensity_g needs a sub-critical mechanism");
  }
  const double eta = mech.eta();
  // Welford accumulation: exactly zero spread for the degenerate b = 2 case.
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < mc_samples; ++i) {
    const double sigma = sample_positive_stable(eta, rng);
    const double value = std::exp(-std::pow(x / sigma, eta));
    const double delta = value - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (value - mean);
  }
  const double n = static_cast<double>(mc_samples);
  return {mech.b / x * mean, mech.b / x * std::sqrt(m2 / n / n)};
}

IntegralEstimate zeta_star_laplace_estimate(const StableMechanism& mech, double lambda,
                                            const QuadratureConfig& cfg) {
  if (mech.regime != Regime::SubCritical) {
    throw UnsupportedRegimeError("zeta_star_laplace needs a sub-critical mechanism");
  }
  if (!(lambda >= 0.0)) {
    throw std::domain_error("zeta_star_laplace: lambda must be nonnegative");
  }
  const double eta = mech.eta();
  const double a = mech.a();
  const DerivativeTable first = DerivativeTable::for_ubar(mech, 1);
  auto big_g = [&](double mu) { return -first.eval(mu) / ubar(mech, mu); };
  auto integrand = [&](double mu) { return big_g(lambda + mu) * ubar(mech, mu); };
  // G(lambda+mu) <= (eta+1)/mu and ubar(mu) <= (a mu^eta)^{-(eta+1)/eta} give
  // the algebraic tail bound below.
  const double half_tol = std::max(cfg.abs_tol, 1e-12) / 2.0;
  double mu_hi = cfg.truncation_point;
  if (mu_hi <= 0.0) {
    mu_hi = std::pow(std::pow(a, -(eta + 1.0) / eta) / half_tol, 1.0 / (eta + 1.0));
    mu_hi = std::max(mu_hi, 10.0);
  }
  const double tail = std::pow(a, -(eta + 1.0) / eta) * std::pow(mu_hi, -(eta + 1.0));
  // The integrand carries a mu^{eta-1} singularity when lambda = 0; the
  // substitution mu = w^{1/eta} removes it on (0, 1].
  auto near_origin = [&](double w) {
    if (w <= 0.0) {
      return 0.0;
    }
    const double mu = std::pow(w, 1.0 / eta);
    return integrand(mu) * std::pow(w, 1.0 / eta - 1.0) / eta;
  };
  const QuadratureResult head = integrate_adaptive(near_origin, 0.0, 1.0, cfg);
  const QuadratureResult body = integrate_adaptive(integrand, 1.0, mu_hi, cfg);
  if (!head.converged || !body.converged) {
    throw QuadratureError("zeta_star_laplace: quadrature did not converge",
                          head.value + body.value, head.error_bound + body.error_bound + tail);
  }
  return {head.value + body.value, head.error_bound + body.error_bound + tail};
}

double zeta_star_laplace(const StableMechanism& mech, double lambda,
                         const QuadratureConfig& cfg) {
  return zeta_star_laplace_estimate(mech, lambda, cfg).value;
}

std::vector<double> size_biased_moments(double eta, int n_max) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::domain_error("size_biased_moments: eta must lie in (0, 1]");
  }
  if (n_max < 1) {
    throw std::invalid_argument("size_biased_moments: n_max must be >= 1");
  }
  // previous[k] = I(n-1, k); the recursion consumes one k-slot per order.
  std::vector<double> previous(static_cast<std::size_t>(n_max) + 1);
  for (int k = 0; k <= n_max; ++k) {
    previous[static_cast<std::size_t>(k)] = (eta + 1.0) / (eta * (k + 1.0) + 1.0);
  }
  std::vector<double> moments;
  moments.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    std::vector<double> current(static_cast<std::size_t>(n_max - n) + 1);
    for (int k = 0; k <= n_max - n; ++k) {
      const double weight = (eta * (k + 1.0) + 1.0) / n;
      current[static_cast<std::size_t>(k)] =
          (1.0 - weight) * previous[static_cast<std::size_t>(k)] +
          weight * previous[static_cast<std::size_t>(k) + 1];
    }
    moments.push_back(current[0]);
    previous = std::move(current);
  }
  return moments;
}

std::vector<double> moment_table_V(const StableMechanism& mech, int n_max) {
  if (mech.regime != Regime::SubCritical) {
    throw UnsupportedRegimeError("moment_table_V needs a sub-critical mechanism");
  }
  // The recursion depends on eta = b-1 only, never on a = gamma/alpha.
  return size_biased_moments(mech.eta(), n_max);
}

BetaFit beta_fit_first_two(double m1, double m2) {
  const double variance = m2 - m1 * m1;
  if (!(variance > 0.0) || !(m1 > 0.0) || !(m1 < 1.0)) {
    throw std::domain_error("beta_fit_first_two: moments are not those of a nondegenerate [0,1] law");
  }
  BetaFit fit;
  const double common = (m1 - m2) / variance;
  fit.alpha = m1 * common;
  fit.beta = (1.0 - m1) * common;
  fit.third_moment = m2 * (fit.alpha + 2.0) / (fit.alpha + fit.beta + 2.0);
  return fit;
}

double beta_third_moment_gap(double eta) {
  const std::vector<double> moments = size_biased_moments(eta, 3);
  const BetaFit fit = beta_fit_first_two(moments[0], moments[1]);
  return fit.third_moment - moments[2];
}

PkIdentityResult pk_identity(const StableMechanism& mech, double lambda, int mc_samples, Rng& rng,
                             const QuadratureConfig& cfg) {
  if (mech.regime != Regime::SubCritical) {
    throw UnsupportedRegimeError("pk_identity needs a sub-critical mechanism");
  }
  if (!(lambda > 0.0) || mc_samples < 2) {
    throw std::invalid_argument("pk_identity: need lambda > 0 and mc_samples >= 2");
  }
  const double eta = mech.eta();
  const double b = mech.b;
  std::vector<double> inv_sigma_eta(static_cast<std::size_t>(mc_samples));
  for (auto& value : inv_sigma_eta) {
    value = std::pow(sample_positive_stable(eta, rng), -eta);
  }
  // Mean integrand over the sigma draws, in log-x coordinates:
  // h(u) = b (1 - e^{-lambda x}) mean_i exp(-x^eta / sigma_i^eta), x = e^u.
  auto mean_exp = [&](double x_eta) {
    double sum = 0.0;
    for (double inv : inv_sigma_eta) {
      sum += std::exp(-x_eta * inv);
    }
    return sum / static_cast<double>(mc_samples);
  };
  auto h = [&](double u) {
    const double x = std::exp(u);
    return b * (-std::expm1(-lambda * x)) * mean_exp(std::pow(x, eta));
  };
  const double quarter_tol = std::max(cfg.abs_tol, 1e-8) / 4.0;
  // Head cutoff: the integrand of x is bounded by lambda b x.
  const double x_lo = quarter_tol / (lambda * b);
  // Tail cutoff by the E1 envelope int_x^inf (b/s) e^{-(s/sig)^eta} ds
  //   <= (b/eta) e^{-v}/v at v = (x/sig)^eta, averaged over draws.
  double x_hi = 1.0;
  auto tail_bound = [&](double x) {
    const double x_eta = std::pow(x, eta);
    double sum = 0.0;
    for (double inv : inv_sigma_eta) {
      const double v = x_eta * inv;
      sum += v > 700.0 ? 0.0 : std::exp(-v) / std::max(v, 1e-12);
    }
    return (b / eta) * sum / static_cast<double>(mc_samples);
  };
  while (tail_bound(x_hi) > quarter_tol && x_hi < 1e300) {
    x_hi *= 2.0;
  }
  std::vector<double> node_x;
  std::vector<double> node_w;
  std::function<void(double, double)> sink = [&](double u, double w) {
    node_x.push_back(std::exp(u));
    node_w.push_back(w);
  };
  const QuadratureResult quad =
      integrate_adaptive(h, std::log(x_lo), std::log(x_hi), cfg, &sink);
  // Per-sample integrals on the final node set give the Monte Carlo spread.
  std::vector<double> per_sample(static_cast<std::size_t>(mc_samples), 0.0);
  for (std::size_t j = 0; j < node_x.size(); ++j) {
    const double x = node_x[j];
    const double factor = node_w[j] * b * (-std::expm1(-lambda * x));
    const double x_eta = std::pow(x, eta);
    for (std::size_t i = 0; i < per_sample.size(); ++i) {
      per_sample[i] += factor * std::exp(-x_eta * inv_sigma_eta[i]);
    }
  }
  double mean = 0.0;
  for (double v : per_sample) {
    mean += v;
  }
  mean /= static_cast<double>(mc_samples);
  double variance = 0.0;
  for (double v : per_sample) {
    variance += (v - mean) * (v - mean);
  }
  variance /= static_cast<double>(mc_samples - 1);
  PkIdentityResult result;
  result.estimate = quad.value;
  result.mc_std_error = std::sqrt(variance / static_cast<double>(mc_samples));
  result.deterministic_error = quad.error_bound + tail_bound(x_hi) + quarter_tol;
  result.target = (b / eta) * std::log1p(std::pow(lambda, eta));
  return result;
}

}  // namespace stablegen
