#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "stablegen/errors.hpp"
#include "stablegen/rates.hpp"

using namespace stablegen;

namespace {

const StableMechanism kQuadratic = StableMechanism::sub_critical(1.0, 1.0, 2.0);
const StableMechanism kStable = StableMechanism::sub_critical(1.0, 1.0, 1.5);

// Exact tails of the offspring-law sums via the alternating binomial
// partial-sum identity: sum_{j<=J} (-1)^j C(x, j) = (-1)^J C(x-1, J).
double log_abs_binom(double x, std::int64_t j) {
  double sum = 0.0;
  for (std::int64_t i = 0; i < j; ++i) {
    sum += std::log(std::fabs(x - static_cast<double>(i)));
  }
  return sum - std::lgamma(static_cast<double>(j) + 1.0);
}

}  // namespace

TEST_CASE("birth rate closed forms") {
  // quadratic: (n+2) gamma c(t) for m = n+1, zero beyond
  for (std::int64_t n : {0, 3, 7}) {
    const double t = 0.7;
    const double c = extinction_c(kQuadratic, t);
    CHECK(birth_rate(kQuadratic, {n, n + 1, t}) ==
          doctest::Approx((static_cast<double>(n) + 2.0) * c).epsilon(1e-12));
    CHECK(birth_rate(kQuadratic, {n, n + 2, t}) == 0.0);
    CHECK(birth_rate(kQuadratic, {n, n + 5, t}) == 0.0);
  }
}

TEST_CASE("birth rate: two algebraic routes agree") {
  for (double b : {1.2, 1.5, 1.9, 2.0}) {
    const auto mech = StableMechanism::sub_critical(1.0, 1.3, b);
    for (std::int64_t n : {0, 1, 4}) {
      for (std::int64_t jump : {1, 2, 5}) {
        for (double t : {0.3, 1.0, 2.5}) {
          const RateQuery q{n, n + jump, t};
          const double general = birth_rate(mech, q);
          const double explicit_form = birth_rate_explicit(mech, q);
          if (explicit_form == 0.0) {
            CHECK(general == 0.0);
          } else {
            CHECK(general == doctest::Approx(explicit_form).epsilon(1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("birth rate contract") {
  CHECK_THROWS_AS(birth_rate(kStable, {3, 3, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(birth_rate(kStable, {3, 2, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(birth_rate(kStable, {0, 1, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(birth_rate(StableMechanism::critical(1.0, 1.5), {0, 1, 1.0}),
                  UnsupportedRegimeError);
}

TEST_CASE("death rate closed forms") {
  for (std::int64_t n : {1, 3, 6}) {
    const double t = 0.7;
    const double c = extinction_c(kQuadratic, t);
    CHECK(death_rate(kQuadratic, {n, n - 1, t}) ==
          doctest::Approx(static_cast<double>(n) * (1.0 + c)).epsilon(1e-10));
    if (n >= 2) {
      CHECK(death_rate(kQuadratic, {n, n - 2, t}) == 0.0);
    }
  }
  CHECK_THROWS_AS(death_rate(kStable, {2, 2, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(death_rate(kStable, {2, 3, 1.0}), std::invalid_argument);
}

TEST_CASE("death rate near the lower stable boundary") {
  const auto mech = StableMechanism::sub_critical(1.0, 1.0, 1.001);
  const RateQuery q{5, 2, 1.0};
  const double limit = bs_limit_rate(5, 2, 1.0, 1.0);
  CHECK(std::fabs(death_rate(mech, q) - limit) / limit < 0.01);
}

TEST_CASE("limit rate values") {
  CHECK(bs_limit_rate(1, 0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(bs_limit_rate(5, 2, 2.0, 1.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(bs_limit_rate(2, 2, 1.0, 1.0), std::invalid_argument);
  // monotone convergence of the death rate toward it
  double previous = 1e9;
  for (double b : {1.1, 1.01, 1.001}) {
    const auto mech = StableMechanism::sub_critical(1.0, 1.0, b);
    const double err =
        std::fabs(death_rate(mech, {4, 1, 0.8}) - bs_limit_rate(4, 1, 0.8, 1.0));
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("critical birth rate") {
  const auto crit2 = StableMechanism::critical(1.0, 2.0);
  CHECK(critical_birth_rate(crit2, {0, 1, 1.0}) == doctest::Approx(2.0));
  CHECK(critical_birth_rate(crit2, {0, 2, 1.0}) == 0.0);
  CHECK(critical_birth_rate(crit2, {3, 5, 0.5}) == 0.0);
  CHECK_THROWS_AS(critical_birth_rate(kStable, {0, 1, 1.0}), UnsupportedRegimeError);

  // alpha -> 0 sweep of the sub-critical rate
  const auto crit = StableMechanism::critical(1.0, 1.5);
  for (std::int64_t n : {0, 2}) {
    for (std::int64_t m : {n + 1, n + 3}) {
      const double target = critical_birth_rate(crit, {n, m, 1.2});
      double previous = 1e9;
      for (double alpha : {1e-2, 1e-4}) {
        const auto mech = StableMechanism::sub_critical(alpha, 1.0, 1.5);
        const double err = std::fabs(birth_rate(mech, {n, m, 1.2}) - target) / target;
        CHECK(err < previous);
        previous = err;
      }
      CHECK(previous < 1e-3);
    }
  }
}

TEST_CASE("quadratic marginal pmf") {
  const double t = std::log(2.0);
  for (std::int64_t n : {0, 1, 5}) {
    CHECK(quadratic_marginal_pmf(kQuadratic, n, t) ==
          doctest::Approx((static_cast<double>(n) + 1.0) * std::pow(2.0, -static_cast<double>(n)) /
                          4.0)
              .epsilon(1e-14));
  }
  double total = 0.0;
  for (std::int64_t n = 0; n < 400; ++n) {
    total += quadratic_marginal_pmf(kQuadratic, n, 0.4);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // pgf of the marginal law
  for (double x : {0.0, 0.5, 0.9}) {
    double pgf = 0.0;
    double power = 1.0;
    for (std::int64_t n = 0; n < 2000; ++n) {
      pgf += quadratic_marginal_pmf(kQuadratic, n, 0.4) * power;
      power *= x;
    }
    const double e = std::exp(0.4);
    CHECK(pgf == doctest::Approx(std::pow((e - 1.0) / (e - x), 2)).epsilon(1e-10));
    CHECK(pgf == doctest::Approx(marginal_pgf(kQuadratic, x, 0.4)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(quadratic_marginal_pmf(kStable, 1, 1.0), UnsupportedRegimeError);
}

TEST_CASE("joint pgf boundary and monotonicity") {
  CHECK(joint_pgf(kStable, 1.0, 1.0, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  // x = 1 reduces to the one-time law at the smaller level
  for (double y : {0.0, 0.4, 0.9}) {
    CHECK(joint_pgf(kQuadratic, 1.0, y, 1.7, 0.6) ==
          doctest::Approx(marginal_pgf(kQuadratic, y, 0.6)).epsilon(1e-12));
    CHECK(joint_pgf(kStable, 1.0, y, 1.7, 0.6) ==
          doctest::Approx(marginal_pgf(kStable, y, 0.6)).epsilon(1e-12));
  }
  // y = 1 reduces to the one-time law at the larger level
  for (double x : {0.0, 0.4, 0.9}) {
    CHECK(joint_pgf(kStable, x, 1.0, 1.7, 0.6) ==
          doctest::Approx(marginal_pgf(kStable, x, 1.7)).epsilon(1e-12));
  }
  // nondecreasing in each argument
  double previous = 0.0;
  for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double value = joint_pgf(kStable, x, 0.6, 1.5, 1.0);
    CHECK(value >= previous);
    previous = value;
  }
  previous = 0.0;
  for (double y : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double value = joint_pgf(kStable, 0.6, y, 1.5, 1.0);
    CHECK(value >= previous);
    previous = value;
  }
  CHECK_THROWS_AS(joint_pgf(kStable, 0.5, 0.5, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("joint pgf matches the quadratic one-time law") {
  for (double y : {0.2, 0.7}) {
    const double s = 0.9;
    const double e = std::exp(s);
    CHECK(joint_pgf(kQuadratic, 1.0, y, 1.4, s) ==
          doctest::Approx(std::pow((e - 1.0) / (e - y), 2)).epsilon(1e-12));
  }
}

TEST_CASE("time-changed birth rates recover the jump-chain rates") {
  // q^b_{n,m}(-t) / |R'(t)| = (m+1) p_{m-n+1}, term by term
  for (double b : {1.5, 2.0}) {
    const auto mech = StableMechanism::sub_critical(1.0, 1.0, b);
    for (double t : {0.5, 1.5}) {
      const double speed = gwi_time_rate(mech, t);
      for (std::int64_t n : {0, 1, 4, 10}) {
        for (std::int64_t jump = 1; jump <= 64; ++jump) {
          const double lhs = birth_rate(mech, {n, n + jump, t}) / speed;
          const double rhs =
              static_cast<double>(n + jump + 1) * offspring_pmf(mech, jump + 1);
          if (rhs == 0.0) {
            CHECK(lhs == 0.0);
          } else {
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("total time-changed birth rate") {
  // sum over targets equals n + b/(b-1); truncated sum plus the exact
  // alternating-binomial tails
  for (double b : {1.5, 1.9, 2.0}) {
    const auto mech = StableMechanism::sub_critical(1.0, 1.0, b);
    for (std::int64_t n : {0, 3, 10}) {
      const std::int64_t cut = 100000;
      double partial = 0.0;
      double mass = offspring_pmf(mech, 2);
      for (std::int64_t j = 2; j <= cut; ++j) {
        partial += (static_cast<double>(n) + j) * mass;
        mass *= (static_cast<double>(j) - b) / static_cast<double>(j + 1);
      }
      // tails: sum_{m>J} p_m = |C(b-1, J)|/(b-1) and sum_{m>J} m p_m =
      // (b/(b-1)) |C(b-2, J-1)|
      double tail = 0.0;
      if (b < 2.0) {
        tail = static_cast<double>(n) * std::exp(log_abs_binom(b - 1.0, cut)) / (b - 1.0) +
               (b / (b - 1.0)) * std::exp(log_abs_binom(b - 2.0, cut - 1));
      }
      const double target = static_cast<double>(n) + mech.b / mech.eta();
      CHECK(std::fabs(partial + tail - target) < 1e-6);
    }
  }
}

TEST_CASE("time-change speed against finite differences") {
  for (double t : {0.2, 1.0, 3.0}) {
    const double h = 1e-5 * t;
    const double fd = (time_change_R(kStable, t + h) - time_change_R(kStable, t - h)) / (2.0 * h);
    CHECK(gwi_time_rate(kStable, t) == doctest::Approx(-fd).epsilon(1e-8));
  }
}

TEST_CASE("quadratic death rate from the derivative tables") {
  // the general table route reproduces n(alpha + gamma c(t)) to 1e-10
  const auto mech = StableMechanism::sub_critical(0.8, 1.7, 2.0);
  for (std::int64_t n = 1; n <= 8; ++n) {
    for (double t : {0.25, 1.0, 3.0}) {
      const double c = extinction_c(mech, t);
      CHECK(death_rate(mech, {n, n - 1, t}) ==
            doctest::Approx(static_cast<double>(n) * (mech.alpha + mech.gamma * c))
                .epsilon(1e-10));
    }
  }
}

TEST_CASE("complex joint pgf extracts true probabilities") {
  // coefficient extraction on a complex circle against the quadratic
  // marginal: at x = 1 the joint law projects onto the time-s marginal
  using C = std::complex<double>;
  const int grid = 32;
  const double rho = 0.5;
  const double s = 0.8;
  for (std::int64_t n : {0, 2, 5}) {
    C sum{};
    for (int p = 0; p < grid; ++p) {
      const double angle = 2.0 * 3.14159265358979323846 * p / grid;
      const C y = rho * C(std::cos(angle), std::sin(angle));
      const C value = joint_pgf(kQuadratic, C{1.0, 0.0}, y, s + 0.3, s);
      sum += value * std::polar(1.0, -angle * static_cast<double>(n));
    }
    const double extracted = sum.real() / grid / std::pow(rho, static_cast<double>(n));
    CHECK(extracted ==
          doctest::Approx(quadratic_marginal_pmf(kQuadratic, n, s)).epsilon(1e-9));
  }
}
