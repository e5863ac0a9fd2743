#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace stablegen {

// Counts of an integer-valued statistic across replicas.
struct EmpiricalDistribution {
  std::map<std::int64_t, std::int64_t> counts;
  std::int64_t total = 0;

  void add(std::int64_t value, std::int64_t n = 1);
  void merge(const EmpiricalDistribution& other);
};

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int cells = 0;
};

// Goodness of fit against a reference pmf, pooling consecutive states from
// the left until every cell's expected count reaches min_expected; everything
// above the last closed cell forms the tail cell with the remaining pmf mass.
ChiSquareResult chi_square_gof(const EmpiricalDistribution& emp,
                               const std::function<double(std::int64_t)>& pmf,
                               double min_expected = 5.0);

// Two-sample homogeneity test on pooled cells (pooled so each cell's
// combined expected count reaches min_expected in both columns).
ChiSquareResult chi_square_homogeneity(const EmpiricalDistribution& a,
                                       const EmpiricalDistribution& b,
                                       double min_expected = 5.0);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Kolmogorov-Smirnov with asymptotic p-values (Stephens' small-sample
// adjustment). Inputs need not be sorted.
KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct LaplacePoint {
  double lambda = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
};

// Mean of e^{-lambda x} with its sampling standard error, per lambda.
std::vector<LaplacePoint> empirical_laplace(const std::vector<double>& samples,
                                            const std::vector<double>& lambdas);

// Survival function of the Kolmogorov distribution (used for the asymptotic
// KS p-values above).
double kolmogorov_survival(double x);

}  // namespace stablegen
