#include "stablegen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace stablegen {

namespace {

double chi_squared_survival(double statistic, int dof) {
  if (dof <= 0) {
    throw std::invalid_argument("chi-square: nonpositive degrees of freedom");
  }
  const boost::math::chi_squared dist(static_cast<double>(dof));
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace

void EmpiricalDistribution::add(std::int64_t value, std::int64_t n) {
  counts[value] += n;
  total += n;
}

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
  for (const auto& [value, count] : other.counts) {
    counts[value] += count;
  }
  total += other.total;
}

ChiSquareResult chi_square_gof(const EmpiricalDistribution& emp,
                               const std::function<double(std::int64_t)>& pmf,
                               double min_expected) {
  if (emp.total <= 0) {
    throw std::invalid_argument("chi_square_gof: empty distribution");
  }
  const double n = static_cast<double>(emp.total);
  const std::int64_t max_state = emp.counts.rbegin()->first;
  std::vector<double> expected;
  std::vector<double> observed;
  double cell_expected = 0.0;
  double cell_observed = 0.0;
  double pmf_consumed = 0.0;
  for (std::int64_t state = 0; state <= max_state; ++state) {
    const double mass = pmf(state);
    pmf_consumed += mass;
    cell_expected += n * mass;
    if (auto it = emp.counts.find(state); it != emp.counts.end()) {
      cell_observed += static_cast<double>(it->second);
    }
    if (cell_expected >= min_expected) {
      expected.push_back(cell_expected);
      observed.push_back(cell_observed);
      cell_expected = 0.0;
      cell_observed = 0.0;
    }
  }
  // Tail cell: all remaining pmf mass (beyond max_state plus any open cell).
  const double tail_expected = n * std::max(0.0, 1.0 - pmf_consumed) + cell_expected;
  const double tail_observed = cell_observed;
  if (!expected.empty() && tail_expected < min_expected) {
    expected.back() += tail_expected;
    observed.back() += tail_observed;
  } else {
    expected.push_back(tail_expected);
    observed.push_back(tail_observed);
  }
  if (expected.size() < 2) {
    throw std::invalid_argument("chi_square_gof: fewer than two cells after pooling");
  }
  ChiSquareResult result;
  result.cells = static_cast<int>(expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double diff = observed[i] - expected[i];
    result.statistic += diff * diff / expected[i];
  }
  result.dof = result.cells - 1;
  result.p_value = chi_squared_survival(result.statistic, result.dof);
  return result;
}

ChiSquareResult chi_square_homogeneity(const EmpiricalDistribution& a,
                                       const EmpiricalDistribution& b, double min_expected) {
  if (a.total <= 0 || b.total <= 0) {
    throw std::invalid_argument("chi_square_homogeneity: empty distribution");
  }
  const double na = static_cast<double>(a.total);
  const double nb = static_cast<double>(b.total);
  const double grand = na + nb;
  std::int64_t max_state = std::max(a.counts.rbegin()->first, b.counts.rbegin()->first);
  std::vector<std::pair<double, double>> cells;  // (count in a, count in b)
  double cell_a = 0.0, cell_b = 0.0;
  auto cell_ok = [&](double ca, double cb) {
    const double pooled = (ca + cb) / grand;
    return pooled * na >= min_expected && pooled * nb >= min_expected;
  };
  for (std::int64_t state = 0; state <= max_state; ++state) {
    if (auto it = a.counts.find(state); it != a.counts.end()) {
      cell_a += static_cast<double>(it->second);
    }
    if (auto it = b.counts.find(state); it != b.counts.end()) {
      cell_b += static_cast<double>(it->second);
    }
    if (cell_ok(cell_a, cell_b)) {
      cells.emplace_back(cell_a, cell_b);
      cell_a = cell_b = 0.0;
    }
  }
  if (cell_a + cell_b > 0.0) {
    if (!cells.empty() && !cell_ok(cell_a, cell_b)) {
      cells.back().first += cell_a;
      cells.back().second += cell_b;
    } else {
      cells.emplace_back(cell_a, cell_b);
    }
  }
  if (cells.size() < 2) {
    throw std::invalid_argument("chi_square_homogeneity: fewer than two cells after pooling");
  }
  ChiSquareResult result;
  result.cells = static_cast<int>(cells.size());
  for (const auto& [ca, cb] : cells) {
    const double pooled = (ca + cb) / grand;
    const double ea = pooled * na;
    const double eb = pooled * nb;
    result.statistic += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
  }
  result.dof = result.cells - 1;
  result.p_value = chi_squared_survival(result.statistic, result.dof);
  return result;
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) {
    return 1.0;
  }
  double sum = 0.0;
  for (int k = 1; k <= 101; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) {
      break;
    }
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) {
    throw std::invalid_argument("ks_one_sample: empty sample");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  const double root_n = std::sqrt(n);
  KsResult result;
  result.statistic = d;
  result.p_value = kolmogorov_survival((root_n + 0.12 + 0.11 / root_n) * d);
  return result;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("ks_two_sample: empty sample");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) {
      ++i;
    }
    while (j < b.size() && b[j] <= x) {
      ++j;
    }
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double root_n = std::sqrt(na * nb / (na + nb));
  KsResult result;
  result.statistic = d;
  result.p_value = kolmogorov_survival((root_n + 0.12 + 0.11 / root_n) * d);
  return result;
}

std::vector<LaplacePoint> empirical_laplace(const std::vector<double>& samples,
                                            const std::vector<double>& lambdas) {
  std::vector<LaplacePoint> points;
  points.reserve(lambdas.size());
  const double n = static_cast<double>(samples.size());
  for (double lambda : lambdas) {
    double sum = 0.0, sum_sq = 0.0;
    for (double x : samples) {
      const double value = std::exp(-lambda * x);
      sum += value;
      sum_sq += value * value;
    }
    const double mean = sum / n;
    const double variance = std::max(0.0, sum_sq / n - mean * mean);
    points.push_back({lambda, mean, std::sqrt(variance / n)});
  }
  return points;
}

}  // namespace stablegen
