#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/expint.hpp>
#include <cmath>

#include "stablegen/rates.hpp"
#include "stablegen/simulate.hpp"
#include "stablegen/stats.hpp"

using namespace stablegen;

namespace {

const StableMechanism kQuadratic = StableMechanism::sub_critical(1.0, 1.0, 2.0);
const StableMechanism kStable = StableMechanism::sub_critical(1.0, 1.0, 1.5);

}  // namespace

TEST_CASE("offspring and immigration samplers") {
  Simulator sim2(kQuadratic);
  Rng rng(101, 0);
  for (int i = 0; i < 200; ++i) {
    CHECK(sim2.sample_offspring(rng) == 2);
    CHECK(sim2.sample_immigration_size(rng) == 1);
  }

  Simulator sim(kStable);
  const int n = 100000;
  double pgf_half = 0.0;
  int twos = 0;
  for (int i = 0; i < n; ++i) {
    const std::int64_t value = sim.sample_offspring(rng);
    CHECK(value >= 2);
    pgf_half += std::pow(0.5, static_cast<double>(value));
    twos += value == 2;
  }
  // empirical pgf at 0.5 within 3 standard errors of g_B(0.5)
  const double target = g_B(kStable, 0.5);
  const double se = std::sqrt(target * (1.0 - target) / n);  // e^{-..} bounded by 1
  CHECK(std::fabs(pgf_half / n - target) < 3.0 * se);
  // P(offspring = 2) = b/2
  const double p2 = 0.75;
  CHECK(std::fabs(static_cast<double>(twos) / n - p2) <
        3.0 * std::sqrt(p2 * (1.0 - p2) / n));

  for (int i = 0; i < 1000; ++i) {
    CHECK(sim.sample_immigration_size(rng) >= 1);
  }
}

TEST_CASE("gwi chain structure") {
  Simulator sim(kStable);
  for (std::uint64_t stream = 0; stream < 50; ++stream) {
    Rng rng(7, stream);
    const JumpPath path = sim.gwi(2.0, rng);
    for (std::size_t i = 0; i < path.times.size(); ++i) {
      if (i > 0) {
        CHECK(path.times[i] > path.times[i - 1]);
        CHECK(path.states[i] > path.states[i - 1]);
      }
    }
    if (!path.states.empty()) {
      CHECK(path.states.front() >= 1);
    }
  }
}

TEST_CASE("gwi first holding time") {
  // from state 0 the chain waits Exp(b/(b-1)); b = 2 gives mean 1/2
  SimulateOptions opts;
  opts.max_jumps = 2;  // only the first jump matters and the chain explodes
  Simulator sim(kQuadratic, opts);
  std::vector<double> waits;
  for (std::uint64_t i = 0; i < 5000; ++i) {
    Rng rng(21, i);
    const JumpPath path = sim.gwi(50.0, rng);
    REQUIRE(!path.times.empty());
    waits.push_back(path.times.front());
  }
  const KsResult ks = ks_one_sample(waits, [](double x) { return -std::expm1(-2.0 * x); });
  CHECK(ks.p_value > 0.001);
}

TEST_CASE("reproducibility") {
  Simulator sim(kStable);
  Rng a(42, 9);
  Rng b(42, 9);
  const JumpPath pa = sim.gwi(2.0, a);
  const JumpPath pb = sim.gwi(2.0, b);
  CHECK(pa.times == pb.times);
  CHECK(pa.states == pb.states);
  Rng c(42, 10);
  const JumpPath pc = sim.gwi(2.0, c);
  CHECK(pa.times != pc.times);
}

TEST_CASE("state cap sets the truncation flag") {
  SimulateOptions opts;
  opts.state_cap = 5;
  Simulator sim(kStable, opts);
  int truncated = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng(3, i);
    const JumpPath path = sim.gwi(3.0, rng);
    if (path.truncated) {
      ++truncated;
      CHECK(path.final_state() >= 5);
    }
  }
  CHECK(truncated > 0);
}

TEST_CASE("ancestral path lives on negative calendar times") {
  Simulator sim(kStable);
  Rng rng(4, 0);
  const JumpPath path = sim.ancestral(-0.2, rng);
  for (double t : path.times) {
    CHECK(t < 0.0);
  }
  // pure birth: the state at a later calendar time dominates
  CHECK(path.state_at(-0.5) <= path.state_at(-0.25));
}

TEST_CASE("ancestral and gwi are the same chain under the time change") {
  Simulator sim(kStable);
  const double t_min = -0.4;
  const double horizon = time_change_R(kStable, -t_min);
  Rng a(77, 5);
  Rng b(77, 5);
  const JumpPath calendar = sim.ancestral(t_min, a);
  const JumpPath gwi = sim.gwi(horizon, b);
  REQUIRE(calendar.states.size() == gwi.states.size());
  CHECK(calendar.states == gwi.states);
  for (std::size_t i = 0; i < gwi.times.size(); ++i) {
    CHECK(calendar.times[i] ==
          doctest::Approx(-time_change_R_inv(kStable, gwi.times[i])).epsilon(1e-12));
  }
}

TEST_CASE("probability of an empty ancestry") {
  // P(state at -t is 0) = ubar(c(t)); for b = 2, t = ln 2 this is 1/4
  Simulator sim(kQuadratic);
  const double t = std::log(2.0);
  const int n = 20000;
  int empty = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng rng(15, i);
    empty += sim.ancestral(-t, rng).final_state() == 0;
  }
  const double p = 0.25;
  CHECK(std::fabs(static_cast<double>(empty) / n - p) < 3.0 * std::sqrt(p * (1 - p) / n));

  Simulator sim_s(kStable);
  int empty_s = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng rng(16, i);
    empty_s += sim_s.ancestral(-t, rng).final_state() == 0;
  }
  const double p_s = ubar(kStable, extinction_c(kStable, t));
  CHECK(std::fabs(static_cast<double>(empty_s) / n - p_s) <
        3.0 * std::sqrt(p_s * (1 - p_s) / n));
}

TEST_CASE("direct sampler basics") {
  Simulator sim(kStable);
  Rng rng(8, 0);
  CHECK_THROWS_AS(sim.ancestral_direct(-0.5, -1.0, 100, rng), std::invalid_argument);
  CHECK_THROWS_AS(sim.ancestral_direct(-0.5, 0.5, 100, rng), std::invalid_argument);
  // essentially zero-length window: no jumps
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng r(9, i);
    const JumpPath path = sim.ancestral_direct(-1.0, -1.0 + 1e-12, 100, r);
    CHECK(path.times.empty());
  }
  // jump budget triggers the truncation flag
  Rng r2(10, 0);
  const JumpPath budget = sim.ancestral_direct(-5.0, -0.01, 3, r2);
  CHECK((budget.truncated || budget.times.size() < 3));
}

TEST_CASE("positive stable sampler") {
  Rng rng(33, 0);
  CHECK(sample_positive_stable(1.0, rng) == 1.0);
  CHECK_THROWS_AS(sample_positive_stable(0.0, rng), std::domain_error);
  CHECK_THROWS_AS(sample_positive_stable(1.5, rng), std::domain_error);
  const int n = 100000;
  double mean_half = 0.0;
  double mean_scaled = 0.0;
  const double t_scale = 3.0;
  for (int i = 0; i < n; ++i) {
    const double sigma = sample_positive_stable(0.5, rng);
    CHECK(sigma > 0.0);
    mean_half += std::exp(-sigma);
    // scale invariance: t^{1/a} sigma_1 has transform e^{-t x^a}; x = 1
    mean_scaled += std::exp(-std::pow(t_scale, 2.0) * sigma);
  }
  CHECK(std::fabs(mean_half / n - std::exp(-1.0)) < 3.0 * std::sqrt(0.25 / n));
  CHECK(std::fabs(mean_scaled / n - std::exp(-t_scale)) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("martingale limit sampler") {
  Rng rng(55, 0);
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = sample_W(kQuadratic, rng);
    CHECK(w > 0.0);
    sum += w;
    sum_sq += w * w;
  }
  const double mean = sum / n;
  const double variance = sum_sq / n - mean * mean;
  CHECK(std::fabs(mean - 2.0) < 3.0 * std::sqrt(2.0 / n));
  CHECK(std::fabs(variance - 2.0) < 0.1);

  double laplace = 0.0;
  for (int i = 0; i < n; ++i) {
    laplace += std::exp(-sample_W(kStable, rng));
  }
  CHECK(std::fabs(laplace / n - 0.125) < 3.0 * std::sqrt(0.125 / n));
}

TEST_CASE("single-time marginal matches the jump chain") {
  // cross-validation of the mixed-Poisson route at a simulable horizon
  const double s = 2.0;
  const int n = 30000;
  EmpiricalDistribution from_paths;
  EmpiricalDistribution from_marginal;
  // equal cap and clamp censor both routes identically (pure birth: a capped
  // path has already passed the clamp)
  const std::int64_t clamp = 10000;
  SimulateOptions opts;
  opts.state_cap = clamp;
  Simulator sim(kStable, opts);
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng a(61, i);
    Rng b(62, i);
    from_paths.add(std::min<std::int64_t>(sim.gwi(s, a).final_state(), clamp));
    from_marginal.add(
        std::min<std::int64_t>(static_cast<std::int64_t>(sample_gwi_state(kStable, s, b)), clamp));
  }
  const ChiSquareResult chi = chi_square_homogeneity(from_paths, from_marginal, 5.0);
  CHECK(chi.p_value > 0.001);
}

TEST_CASE("family decomposition structure") {
  Rng rng(71, 0);
  const FamilyDecomposition families = sample_family_decomposition(kStable, 200, rng);
  REQUIRE(!families.sizes.empty());
  for (std::size_t i = 0; i < families.sizes.size(); ++i) {
    CHECK(families.sizes[i] > 0.0);
    if (i > 0) {
      CHECK(families.immigration_clocks[i] > families.immigration_clocks[i - 1]);
    }
  }
  CHECK(families.scale == doctest::Approx(kappa(kStable)));
  CHECK(families.tail_factor < 1e-11);
}

TEST_CASE("family masses sum to the stationary population") {
  // Laplace transform of the total equals (1 + lambda^{b-1})^{-b/(b-1)}
  for (const StableMechanism& mech : {kStable, kQuadratic}) {
    const int n = 20000;
    std::vector<double> totals(n);
    for (int i = 0; i < n; ++i) {
      Rng rng(81, static_cast<std::uint64_t>(i));
      totals[static_cast<std::size_t>(i)] =
          sample_family_decomposition(mech, 256, rng).total();
    }
    for (const LaplacePoint& point : empirical_laplace(totals, {0.5, 1.0, 2.0})) {
      const double target =
          std::pow(1.0 + std::pow(point.lambda, mech.eta()), -mech.b / mech.eta());
      CHECK(std::fabs(point.estimate - target) < 3.0 * point.std_error);
    }
  }
}

TEST_CASE("quadratic family decomposition is a Gamma subordinator cut") {
  // with b = 2 the discounted family masses are the jumps of a Gamma
  // subordinator over [0, 2]: the number above x is Poisson with mean
  // 2 E1(x)
  const double x = 0.1;
  const double mean_target = 2.0 * boost::math::expint(1, x);
  const int n = 20000;
  double count_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    Rng rng(91, static_cast<std::uint64_t>(i));
    const FamilyDecomposition families = sample_family_decomposition(kQuadratic, 512, rng);
    for (double size : families.sizes) {
      count_sum += size > x;
    }
  }
  const double mean = count_sum / n;
  CHECK(std::fabs(mean - mean_target) < 3.0 * std::sqrt(mean_target / n));
}

TEST_CASE("oldest family mass distribution") {
  // two independently seeded constructions of the first discounted mass agree
  const int n = 10000;
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    Rng ra(101, static_cast<std::uint64_t>(i));
    Rng rb(202, static_cast<std::uint64_t>(i));
    a[static_cast<std::size_t>(i)] = sample_family_decomposition(kStable, 64, ra).sizes.front();
    const double clock = rb.exponential(kStable.b / kStable.eta());
    const double w = std::pow(rb.exponential(), 2.0) * sample_positive_stable(0.5, rb);
    b[static_cast<std::size_t>(i)] = std::exp(-clock / kStable.eta()) * w;
  }
  CHECK(ks_two_sample(a, b).p_value > 0.001);
}

TEST_CASE("size-biased fraction lies in the unit interval") {
  Rng rng(111, 0);
  for (int i = 0; i < 500; ++i) {
    const FamilyDecomposition families = sample_family_decomposition(kStable, 128, rng);
    const double v = size_biased_fraction(families, rng);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("critical chain") {
  const auto crit = StableMechanism::critical(1.0, 1.5);
  SimulateOptions opts;
  opts.max_jumps = 16;
  Simulator sim(crit, opts);
  Rng rng(121, 0);
  CHECK_THROWS_AS(sim.gwi(1.0, rng), UnsupportedRegimeError);
  const double T = 2.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng r(122, i);
    const JumpPath path = sim.gwi_critical(T, 20.0, r);
    for (double t : path.times) {
      CHECK(t > -T);
      CHECK(t < 0.0);
    }
  }
  // first-jump law: P(tau_0 < t) = (t/T)^{b/(b-1)}
  std::vector<double> first(5000);
  for (std::uint64_t i = 0; i < first.size(); ++i) {
    Rng r(123, i);
    const JumpPath path = sim.gwi_critical(T, 40.0, r);
    REQUIRE(!path.times.empty());
    first[i] = -path.times.front();
  }
  const double power = crit.b / crit.eta();
  const KsResult ks = ks_one_sample(
      first, [&](double x) { return std::pow(std::clamp(x / T, 0.0, 1.0), power); });
  CHECK(ks.p_value > 0.001);
  // window population: Laplace transform of Z0^(T)
  std::vector<double> z(20000);
  for (std::uint64_t i = 0; i < z.size(); ++i) {
    Rng r(124, i);
    z[i] = sample_Z0_T(crit, T, r);
  }
  for (const LaplacePoint& point : empirical_laplace(z, {0.5, 1.0})) {
    const double target = std::pow(
        1.0 + crit.gamma * crit.eta() * std::pow(point.lambda, crit.eta()) * T,
        -crit.b / crit.eta());
    CHECK(std::fabs(point.estimate - target) < 3.0 * point.std_error);
  }
  CHECK_THROWS_AS(sample_Z0_T(kStable, 1.0, rng), UnsupportedRegimeError);
}
