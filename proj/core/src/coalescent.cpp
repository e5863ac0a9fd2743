#include "stablegen/coalescent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "stablegen/analytics.hpp"
#include "stablegen/derivative_table.hpp"
#include "stablegen/errors.hpp"
#include "stablegen/rates.hpp"
#include "stablegen/simulate.hpp"
#include "stablegen/stats.hpp"

namespace stablegen {

namespace {

double normal_two_sided_tail(double z) {
  return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

// Death rates re-evaluated with cached derivative tables; the chain queries
// the same orders at every proposal.
class DeathRateCache {
 public:
  explicit DeathRateCache(const StableMechanism& mech) : mech_(mech) {
    tables_.push_back(DerivativeTable::for_ubar(mech, 0));
  }

  double rate(std::int64_t n, std::int64_t m, double t) {
    const double log_c = log_extinction_c(mech_, t);
    const double log_psi =
        log_abs_psi_derivative(mech_, static_cast<int>(n - m + 1), log_c);
    if (std::isinf(log_psi)) {
      return 0.0;
    }
    const double log_rate = log_binom(n + 1, m) + table(m).log_abs_eval(log_c) -
                            table(n).log_abs_eval(log_c) + log_psi;
    return std::exp(log_rate);
  }

  double total(std::int64_t n, double t) {
    double sum = 0.0;
    for (std::int64_t m = 0; m < n; ++m) {
      sum += rate(n, m, t);
    }
    return sum;
  }

 private:
  const DerivativeTable& table(std::int64_t order) {
    while (static_cast<std::int64_t>(tables_.size()) <= order) {
      tables_.push_back(tables_.back().next());
    }
    return tables_[static_cast<std::size_t>(order)];
  }

  static double log_binom(std::int64_t n, std::int64_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
  }

  StableMechanism mech_;
  std::vector<DerivativeTable> tables_;
};

}  // namespace

Partition Partition::singletons(int n) {
  Partition partition;
  partition.blocks.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    partition.blocks.push_back({i});
  }
  return partition;
}

void Partition::canonicalize() {
  for (auto& block : blocks) {
    std::sort(block.begin(), block.end());
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const std::vector<int>& lhs, const std::vector<int>& rhs) {
              return lhs.front() < rhs.front();
            });
}

Partition restrict_partition(const Partition& partition, int m) {
  Partition restricted;
  for (const auto& block : partition.blocks) {
    std::vector<int> kept;
    for (int element : block) {
      if (element <= m) {
        kept.push_back(element);
      }
    }
    if (!kept.empty()) {
      restricted.blocks.push_back(std::move(kept));
    }
  }
  restricted.canonicalize();
  return restricted;
}

Partition relabel_partition(const Partition& partition, const std::vector<int>& perm) {
  Partition relabeled;
  for (const auto& block : partition.blocks) {
    std::vector<int> mapped;
    mapped.reserve(block.size());
    for (int element : block) {
      mapped.push_back(perm[static_cast<std::size_t>(element) - 1]);
    }
    relabeled.blocks.push_back(std::move(mapped));
  }
  relabeled.canonicalize();
  return relabeled;
}

std::vector<int> block_sizes_sorted(const Partition& partition) {
  std::vector<int> sizes;
  sizes.reserve(partition.blocks.size());
  for (const auto& block : partition.blocks) {
    sizes.push_back(static_cast<int>(block.size()));
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<int>());
  return sizes;
}

CoalescentPath simulate_coalescent(const StableMechanism& mech, int n, double T, Rng& rng) {
  if (mech.regime != Regime::SubCritical) {
    throw UnsupportedRegimeError("simulate_coalescent needs a sub-critical mechanism");
  }
  if (n < 2 || !(T > 0.0)) {
    throw std::invalid_argument("simulate_coalescent: need n >= 2 and T > 0");
  }
  DeathRateCache cache(mech);
  CoalescentPath path;
  path.start_time = T;
  Partition current = Partition::singletons(n);
  std::int64_t state = n - 1;
  double t = T;
  while (state > 0) {
    const double dominating = cache.total(state, t);
    // Adaptive slab with the monotone-decay check at its endpoints.
    double slab_len = std::max(0.5 / dominating, 0.05 * t);
    while (cache.total(state, t + slab_len) > dominating * (1.0 + 1e-9)) {
      slab_len *= 0.5;
      if (slab_len < 1e-12 * t) {
        throw DominatingRateError("simulate_coalescent: death rate not decreasing near t = " +
                                  std::to_string(t));
      }
    }
    const double proposal = t + rng.exponential(dominating);
    if (proposal >= t + slab_len) {
      t += slab_len;
      continue;
    }
    const double actual = cache.total(state, proposal);
    if (actual > dominating * (1.0 + 1e-9)) {
      throw DominatingRateError("simulate_coalescent: rate " + std::to_string(actual) +
                                " exceeds dominating bound " + std::to_string(dominating) +
                                " at state " + std::to_string(state) + ", t = " +
                                std::to_string(proposal));
    }
    t = proposal;
    if (rng.uniform() * dominating >= actual) {
      continue;  // thinned out
    }
    // Accepted death: pick the target state by its rate share.
    double pick = rng.uniform() * actual;
    std::int64_t target = 0;
    for (std::int64_t m = 0; m < state; ++m) {
      pick -= cache.rate(state, m, t);
      if (pick <= 0.0) {
        target = m;
        break;
      }
    }
    // Chain jump (k-1) -> (k-m): with k = state+1 blocks, merge
    // state + 1 - target of them into one.
    const int k = static_cast<int>(current.blocks.size());
    const int merge_count = static_cast<int>(state + 1 - target);
    std::vector<int> indices(static_cast<std::size_t>(k));
    std::iota(indices.begin(), indices.end(), 0);
    for (int i = 0; i < merge_count; ++i) {
      const int j = i + static_cast<int>(rng.uniform() * static_cast<double>(k - i));
      std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
    }
    std::vector<int> merged;
    for (int i = 0; i < merge_count; ++i) {
      const auto& block = current.blocks[static_cast<std::size_t>(indices[static_cast<std::size_t>(i)])];
      merged.insert(merged.end(), block.begin(), block.end());
    }
    std::vector<std::vector<int>> next_blocks;
    next_blocks.reserve(static_cast<std::size_t>(k - merge_count + 1));
    std::vector<bool> used(static_cast<std::size_t>(k), false);
    for (int i = 0; i < merge_count; ++i) {
      used[static_cast<std::size_t>(indices[static_cast<std::size_t>(i)])] = true;
    }
    for (int i = 0; i < k; ++i) {
      if (!used[static_cast<std::size_t>(i)]) {
        next_blocks.push_back(current.blocks[static_cast<std::size_t>(i)]);
      }
    }
    next_blocks.push_back(std::move(merged));
    current.blocks = std::move(next_blocks);
    current.canonicalize();
    state = target;
    path.times.push_back(t);
    path.partitions.push_back(current);
  }
  return path;
}

double bs_rate(int k, int m) {
  if (!(2 <= m && m <= k)) {
    throw std::invalid_argument("bs_rate: need 2 <= m <= k");
  }
  auto factorial = [](int j) {
    double value = 1.0;
    for (int i = 2; i <= j; ++i) {
      value *= i;
    }
    return value;
  };
  return factorial(m - 2) * factorial(k - m) / factorial(k - 1);
}

BsConvergenceReport bs_convergence_report(const std::vector<double>& bs, double alpha,
                                          double gamma, int n, double T,
                                          const std::vector<double>& t_grid) {
  BsConvergenceReport report;
  for (double b : bs) {
    const StableMechanism mech = StableMechanism::sub_critical(alpha, gamma, b);
    double worst = 0.0;
    for (int k = 2; k <= n; ++k) {
      for (int m = 2; m <= k; ++m) {
        for (double t : t_grid) {
          const double level = T * std::exp(gamma * t);
          const double scaled = T * gamma * std::exp(gamma * t) *
                                death_rate(mech, RateQuery{k - 1, k - m, level}) /
                                std::exp(std::lgamma(k + 1.0) - std::lgamma(m + 1.0) -
                                         std::lgamma(static_cast<double>(k - m) + 1.0));
          const double limit = bs_rate(k, m);
          const double rel = std::fabs(scaled - limit) / limit;
          report.rows.push_back({b, k, m, t, scaled, limit, rel});
          worst = std::max(worst, rel);
        }
      }
    }
    report.max_rel_error.push_back(worst);
  }
  return report;
}

PdTestReport pd_tests(const StableMechanism& mech, int replicas, Rng& rng, double p_floor) {
  if (mech.regime != Regime::SubCritical) {
    throw UnsupportedRegimeError("pd_tests needs a sub-critical mechanism");
  }
  if (replicas < 100) {
    throw std::invalid_argument("pd_tests: needs at least 100 replicas");
  }
  constexpr int kMaxFamilies = 256;
  constexpr int kCoordinates = 3;
  PdTestReport report;
  report.replicas = replicas;
  std::vector<double> v_samples(static_cast<std::size_t>(replicas));
  std::vector<std::vector<double>> coords(kCoordinates,
                                          std::vector<double>(static_cast<std::size_t>(replicas)));
  for (int i = 0; i < replicas; ++i) {
    const FamilyDecomposition families = sample_family_decomposition(mech, kMaxFamilies, rng);
    const double total = families.total();
    v_samples[static_cast<std::size_t>(i)] = size_biased_fraction(families, rng);
    for (int j = 0; j < kCoordinates; ++j) {
      coords[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          j < static_cast<int>(families.sizes.size())
              ? families.sizes[static_cast<std::size_t>(j)] / total
              : 0.0;
    }
  }
  if (mech.quadratic()) {
    // V ~ Beta(1,2).
    const KsResult ks = ks_one_sample(v_samples, [](double x) { return x * (2.0 - x); });
    report.entries.push_back({"size_biased_vs_beta12", ks.statistic, ks.p_value,
                              ks.p_value > p_floor});
    // Age-ordered fractions against the GEM stick-breaking law; reference
    // coordinates drawn with the exact Beta(1,2) inverse CDF.
    const double bonferroni = p_floor / kCoordinates;
    for (int j = 0; j < kCoordinates; ++j) {
      std::vector<double> reference(static_cast<std::size_t>(replicas));
      for (auto& value : reference) {
        double stick = 1.0;
        double coordinate = 0.0;
        for (int i = 0; i <= j; ++i) {
          const double u = 1.0 - std::sqrt(1.0 - rng.uniform());
          coordinate = stick * u;
          stick *= 1.0 - u;
        }
        value = coordinate;
      }
      const KsResult ks_coord = ks_two_sample(coords[static_cast<std::size_t>(j)], reference);
      report.entries.push_back({"gem_coordinate_" + std::to_string(j), ks_coord.statistic,
                                ks_coord.p_value, ks_coord.p_value > bonferroni});
    }
  } else {
    const std::vector<double> exact = moment_table_V(mech, 3);
    const double n = static_cast<double>(replicas);
    std::vector<double> mean(3, 0.0), second(3, 0.0);
    for (double v : v_samples) {
      double power = 1.0;
      for (int k = 0; k < 3; ++k) {
        power *= v;
        mean[static_cast<std::size_t>(k)] += power;
        second[static_cast<std::size_t>(k)] += power * power;
      }
    }
    for (int k = 0; k < 3; ++k) {
      mean[static_cast<std::size_t>(k)] /= n;
      const double variance =
          std::max(0.0, second[static_cast<std::size_t>(k)] / n -
                            mean[static_cast<std::size_t>(k)] * mean[static_cast<std::size_t>(k)]);
      const double se = std::sqrt(variance / n);
      const double z = (mean[static_cast<std::size_t>(k)] - exact[static_cast<std::size_t>(k)]) / se;
      report.entries.push_back({"moment_" + std::to_string(k + 1) + "_vs_recursion", z,
                                normal_two_sided_tail(z), std::fabs(z) <= 3.0});
    }
    // The Beta law matched to (E[V], E[V^2]) misses E[V^3] by
    // beta_third_moment_gap(eta); whether Monte Carlo can resolve that gap
    // depends on the replica budget, so this entry only reports.
    const BetaFit fit = beta_fit_first_two(exact[0], exact[1]);
    const double variance3 =
        std::max(0.0, second[2] / n - mean[2] * mean[2]);
    const double se3 = std::sqrt(variance3 / n);
    const double z3 = (mean[2] - fit.third_moment) / se3;
    report.entries.push_back({"beta_fit_mispredicts_third_moment", z3,
                              normal_two_sided_tail(z3), std::fabs(z3) > 3.0, true});
  }
  report.all_pass = std::all_of(report.entries.begin(), report.entries.end(),
                                [](const PdTestEntry& entry) {
                                  return entry.pass || entry.informational;
                                });
  return report;
}

}  // namespace stablegen
