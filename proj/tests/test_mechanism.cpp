#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "stablegen/derivative_table.hpp"
#include "stablegen/errors.hpp"
#include "stablegen/mechanism.hpp"

using namespace stablegen;

namespace {

// Central difference with one step-halving extrapolation: error O(h^4).
template <class F>
double derivative_oracle(F&& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  const double d2 = (f(x + h / 2.0) - f(x - h / 2.0)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

const StableMechanism kQuadratic = StableMechanism::sub_critical(1.0, 1.0, 2.0);
const StableMechanism kStable = StableMechanism::sub_critical(1.0, 1.0, 1.5);

}  // namespace

TEST_CASE("mechanism validation") {
  CHECK_THROWS_AS(StableMechanism::sub_critical(0.0, 1.0, 1.5), std::domain_error);
  CHECK_THROWS_AS(StableMechanism::sub_critical(1.0, -1.0, 1.5), std::domain_error);
  CHECK_THROWS_AS(StableMechanism::sub_critical(1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(StableMechanism::sub_critical(1.0, 1.0, 2.5), std::domain_error);
  CHECK(StableMechanism::critical(1.0, 1.5).alpha == 0.0);
  CHECK(kStable.eta() == doctest::Approx(0.5));
  CHECK(kStable.a() == doctest::Approx(1.0));
  CHECK_THROWS_AS(StableMechanism::critical(1.0, 1.5).a(), UnsupportedRegimeError);
}

TEST_CASE("branching mechanism values") {
  CHECK(psi(kQuadratic, 0.0) == 0.0);
  CHECK(psi(kQuadratic, 2.0) == doctest::Approx(6.0));
  CHECK(psi(StableMechanism::critical(1.0, 1.5), 4.0) == doctest::Approx(8.0));
  CHECK_THROWS_AS(psi(kQuadratic, -1.0), std::domain_error);
}

TEST_CASE("psi derivatives") {
  CHECK(psi_derivative(kQuadratic, 2, 5.0) == doctest::Approx(2.0));
  CHECK(psi_derivative(kQuadratic, 3, 5.0) == 0.0);
  CHECK(psi_derivative(kStable, 2, 4.0) == doctest::Approx(0.375));
  // against the finite-difference oracle of the first derivative
  const double fd = derivative_oracle([&](double x) { return psi_derivative(kStable, 1, x); },
                                      4.0, 1e-3);
  CHECK(psi_derivative(kStable, 2, 4.0) == doctest::Approx(fd).epsilon(1e-8));
  CHECK_THROWS_AS(psi_derivative(kStable, 2, 0.0), std::domain_error);
  // log-space route agrees with the direct one
  CHECK(std::exp(log_abs_psi_derivative(kStable, 3, std::log(2.0))) ==
        doctest::Approx(std::fabs(psi_derivative(kStable, 3, 2.0))).epsilon(1e-12));
}

TEST_CASE("immigration mechanism") {
  CHECK(phi(kQuadratic, 3.0) == doctest::Approx(6.0));
  CHECK(phi(StableMechanism::sub_critical(1.0, 2.0, 1.5), 4.0) == doctest::Approx(6.0));
  CHECK(phi(kStable, 0.0) == 0.0);
}

TEST_CASE("extinction intensity") {
  CHECK(extinction_c(kQuadratic, std::log(2.0)) == doctest::Approx(1.0));
  CHECK(extinction_c(StableMechanism::critical(1.0, 2.0), 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(extinction_c(kStable, 0.0), std::domain_error);
  // strictly decreasing and exploding at 0+
  CHECK(extinction_c(kStable, 0.01) > extinction_c(kStable, 0.1));
  CHECK(extinction_c(kStable, 1e-8) > 1e10);

  // flow consistency u(c(t), s) = c(t + s)
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> uni(0.05, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double t = uni(gen), s = uni(gen);
    const double lhs = u_flow(kStable, extinction_c(kStable, t), s);
    const double rhs = extinction_c(kStable, t + s);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("extinction inverse by bisection") {
  for (double t : {0.05, 0.3, 1.0, 4.0}) {
    const double c = extinction_c(kStable, t);
    CHECK(extinction_c_inverse(kStable, c) == doctest::Approx(t).epsilon(1e-10));
  }
}

TEST_CASE("flow semigroup") {
  CHECK(u_flow(kStable, 1.7, 0.0) == doctest::Approx(1.7));
  // u(+inf, t) -> c(t)
  CHECK(u_flow(kQuadratic, 1e8, 0.9) ==
        doctest::Approx(extinction_c(kQuadratic, 0.9)).epsilon(1e-6));
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> uni(0.01, 3.0);
  for (const StableMechanism& mech :
       {kStable, kQuadratic, StableMechanism::critical(1.3, 1.5),
        StableMechanism::critical(1.0, 2.0)}) {
    for (int i = 0; i < 25; ++i) {
      const double lambda = uni(gen), s = uni(gen), t = uni(gen);
      const double once = u_flow(mech, u_flow(mech, lambda, s), t);
      const double direct = u_flow(mech, lambda, s + t);
      CHECK(once == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("stationary Laplace transform") {
  CHECK(ubar(kQuadratic, 0.0) == 1.0);
  CHECK(ubar(kQuadratic, 1.0) == doctest::Approx(0.25));
  CHECK(ubar(kStable, 1.0) == doctest::Approx(0.125));
  CHECK(ubar(kStable, 0.5) > ubar(kStable, 1.5));
  CHECK_THROWS_AS(ubar(StableMechanism::critical(1.0, 1.5), 1.0), UnsupportedRegimeError);

  // ubar(lambda) = kappa alpha e^{-alpha c^{-1}(lambda)} / psi(lambda)
  const double k = kappa(kStable);
  for (double lambda : {0.01, 0.3, 2.0, extinction_c(kStable, 0.011)}) {
    const double rhs = k * kStable.alpha *
                       std::exp(-kStable.alpha * extinction_c_inverse(kStable, lambda)) /
                       psi(kStable, lambda);
    CHECK(ubar(kStable, lambda) == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("kappa") {
  CHECK(kappa(kStable) == doctest::Approx(1.0));
  CHECK(kappa(StableMechanism::sub_critical(4.0, 1.0, 1.5)) == doctest::Approx(16.0));
  CHECK_THROWS_AS(kappa(StableMechanism::critical(1.0, 1.5)), UnsupportedRegimeError);
  // kappa = lim c(t) e^{alpha t}
  const double t = 50.0;
  CHECK(extinction_c(kStable, t) * std::exp(kStable.alpha * t) ==
        doctest::Approx(kappa(kStable)).epsilon(1e-6));
}

TEST_CASE("time change") {
  for (double u : {0.01, 1.0, 10.0}) {
    CHECK(time_change_R(kStable, time_change_R_inv(kStable, u)) ==
          doctest::Approx(u).epsilon(1e-12));
  }
  CHECK(time_change_R(kQuadratic, std::log(2.0)) == doctest::Approx(std::log(2.0)));
  // c(R_inv(u)) = ((alpha/gamma)(e^u - 1))^{1/(b-1)}
  for (double u : {0.2, 1.0, 3.0}) {
    const double lhs = extinction_c(kStable, time_change_R_inv(kStable, u));
    const double rhs = std::pow(std::expm1(u), 1.0 / kStable.eta());
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
  CHECK_THROWS_AS(time_change_R(kStable, 0.0), std::domain_error);
  CHECK_THROWS_AS(time_change_R_inv(kStable, -1.0), std::domain_error);
}

TEST_CASE("generating functions") {
  CHECK(g_B(kQuadratic, 0.3) == doctest::Approx(0.09));
  CHECK(g_I(kQuadratic, 0.3) == doctest::Approx(0.3));
  for (const StableMechanism& mech : {kStable, kQuadratic}) {
    CHECK(g_B(mech, 1.0) == doctest::Approx(1.0));
    CHECK(g_I(mech, 1.0) == doctest::Approx(1.0));
    CHECK(g_K(mech, 5, 1.0) == doctest::Approx(1.0));
    for (double r : {0.0, 0.2, 0.7, 1.0}) {
      CHECK(g_K(mech, 0, r) == doctest::Approx(g_I(mech, r)));
      CHECK(g_B(mech, r) >= 0.0);
      CHECK(g_B(mech, r) <= 1.0);
      // exact convex combination
      const std::int64_t k = 3;
      const double w = k * mech.eta() / (k * mech.eta() + mech.b);
      CHECK(g_K(mech, k, r) ==
            doctest::Approx(w * g_B(mech, r) + (1.0 - w) * g_I(mech, r)).epsilon(1e-15));
    }
  }
}

TEST_CASE("offspring and immigration pmf") {
  CHECK(offspring_pmf(kQuadratic, 2) == doctest::Approx(1.0));
  CHECK(offspring_pmf(kQuadratic, 3) == 0.0);
  CHECK(immigration_pmf(kQuadratic, 1) == doctest::Approx(1.0));
  CHECK(immigration_pmf(kQuadratic, 2) == 0.0);
  CHECK(offspring_pmf(kStable, 0) == 0.0);
  CHECK(offspring_pmf(kStable, 1) == 0.0);
  CHECK(offspring_pmf(kStable, 2) == doctest::Approx(0.75));
  CHECK(immigration_pmf(kStable, 0) == 0.0);

  // n p_n = (b/(b-1)) q_{n-1}
  for (std::int64_t n = 2; n <= 50; ++n) {
    CHECK(static_cast<double>(n) * offspring_pmf(kStable, n) ==
          doctest::Approx(kStable.b / kStable.eta() * immigration_pmf(kStable, n - 1))
              .epsilon(1e-12));
  }

  // partial sums approach 1 with the heavy-tail decay rate
  double total = offspring_pmf(kStable, 2);
  double mass = total;
  for (std::int64_t n = 2; n < 1000000; ++n) {
    mass *= (static_cast<double>(n) - kStable.b) / static_cast<double>(n + 1);
    total += mass;
  }
  CHECK(std::fabs(total - 1.0) < 1e-5);
}

TEST_CASE("pgf and pmf agree") {
  const double r = 0.9;
  for (double b : {1.2, 1.5, 1.9}) {
    const auto mech = StableMechanism::sub_critical(1.0, 1.0, b);
    double sum = 0.0;
    double mass = offspring_pmf(mech, 2);
    double power = r * r;
    sum += mass * power;
    for (std::int64_t n = 2; n < 100000; ++n) {
      mass *= (static_cast<double>(n) - b) / static_cast<double>(n + 1);
      power *= r;
      sum += mass * power;
    }
    CHECK(sum == doctest::Approx(g_B(mech, r)).epsilon(1e-6));
  }
}

TEST_CASE("derivative tables match finite differences") {
  for (const StableMechanism& mech : {kStable, kQuadratic,
                                      StableMechanism::sub_critical(2.0, 0.7, 1.3)}) {
    auto table = DerivativeTable::for_ubar(mech, 0);
    CHECK(table.terms().size() == 1);
    CHECK(table.terms()[0].coeff == 1.0);
    CHECK(table.terms()[0].power_outer == doctest::Approx(-mech.b / mech.eta()));
    CHECK(table.terms()[0].power_lambda == 0.0);
    for (double lambda : {0.4, 1.3}) {
      CHECK(table.eval(lambda) == doctest::Approx(ubar(mech, lambda)).epsilon(1e-14));
    }
    for (int n = 1; n <= 8; ++n) {
      auto next = table.next();
      for (double lambda : {0.4, 1.3, 6.0}) {
        const double fd = derivative_oracle(
            [&](double x) { return table.eval(x); }, lambda, 1e-4 * std::max(1.0, lambda));
        CHECK(next.eval(lambda) == doctest::Approx(fd).epsilon(1e-6));
      }
      table = next;
    }
  }
}

TEST_CASE("derivative table explicit first order") {
  const auto first = DerivativeTable::for_ubar(kQuadratic, 1);
  CHECK(first.eval(1.0) == doctest::Approx(-0.25).epsilon(1e-8));
  const double fd =
      derivative_oracle([&](double x) { return ubar(kQuadratic, x); }, 1.0, 1e-4);
  CHECK(first.eval(1.0) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("derivative table signs and log evaluation") {
  for (int n = 0; n <= 8; ++n) {
    const auto table = DerivativeTable::for_ubar(kStable, n);
    CHECK(table.sign() == (n % 2 == 0 ? 1 : -1));
    for (double lambda : {0.1, 1.0, 10.0}) {
      const double value = table.eval(lambda);
      CHECK(value * table.sign() > 0.0);
      CHECK(table.log_abs_eval(std::log(lambda)) ==
            doctest::Approx(std::log(std::fabs(value))).epsilon(1e-12));
    }
  }
  // far outside double range for the plain evaluation
  const auto table = DerivativeTable::for_ubar(StableMechanism::sub_critical(1.0, 1.0, 1.001), 6);
  const double log_c = log_extinction_c(StableMechanism::sub_critical(1.0, 1.0, 1.001), 1.0);
  CHECK(log_c > 5000.0);
  CHECK(std::isfinite(table.log_abs_eval(log_c)));
}
