#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "stablegen/mechanism.hpp"
#include "stablegen/random.hpp"

namespace stablegen {

enum class PathOrigin { GwiClock, AncestralCalendar, CriticalCalendar };

// Piecewise-constant pure-birth trajectory: states[i] is the state right
// after the jump at times[i]. Times are strictly increasing; states strictly
// increasing (every jump adds at least one). AncestralCalendar and
// CriticalCalendar paths have negative times.
struct JumpPath {
  std::vector<double> times;
  std::vector<std::int64_t> states;
  PathOrigin origin = PathOrigin::GwiClock;
  bool truncated = false;

  // State at the given time (initial state before the first jump is 0).
  std::int64_t state_at(double time) const;
  std::int64_t final_state() const { return states.empty() ? 0 : states.back(); }
};

// Age-ordered immigration clocks T_i (GWI time) and the extant family masses
// they generate. sizes[i] holds scale * zeta_i where scale is kappa in the
// sub-critical case and c(T) in the critical one. The truncated remainder is
// distributed as tail_factor times an independent copy of W (self-similarity
// of the underlying Poisson point measure), so tail_factor records the
// truncation error scale.
struct FamilyDecomposition {
  std::vector<double> immigration_clocks;
  std::vector<double> sizes;
  double scale = 1.0;
  double tail_factor = 0.0;

  double total() const;
};

struct SimulateOptions {
  // Heavy-tailed immigrant batches make huge states reachable in finite time;
  // exceeding the cap sets JumpPath::truncated instead of erroring.
  std::int64_t state_cap = 10'000'000;
  std::int64_t max_jumps = std::numeric_limits<std::int64_t>::max();
};

// Inverse-CDF sampler over a pmf given by a ratio recurrence, with lazily
// extended prefix sums and binary search, so a draw costs O(log) after the
// table warmed up. Saturates at value_cap (heavy tails reach any cap with
// positive probability); callers translate saturation into path truncation.
class RecurrencePmfSampler {
 public:
  RecurrencePmfSampler(std::int64_t first, double first_mass, double ratio_shift);

  std::int64_t sample(Rng& rng, std::int64_t value_cap, bool* saturated);
  double pmf(std::int64_t n) const;

 private:
  void extend(std::int64_t target);

  std::int64_t first_;
  double ratio_shift_;  // p_{n+1} = p_n * (n - ratio_shift_)/(n+1)
  std::vector<double> cumulative_;  // cumulative_[i] = P(value <= first_ + i)
  double last_mass_;
};

// Jump-chain samplers for the GWI representation of the ancestral process.
// One Simulator per worker thread; the pmf tables extend lazily and are not
// synchronized.
class Simulator {
 public:
  explicit Simulator(const StableMechanism& mech, SimulateOptions opts = {});

  const StableMechanism& mechanism() const { return mech_; }

  // Offspring count at a branch point, support {2, 3, ...} (pgf g_B).
  std::int64_t sample_offspring(Rng& rng);
  // Immigrant batch size, support {1, 2, ...} (pgf g_I).
  std::int64_t sample_immigration_size(Rng& rng);

  // Time-homogeneous GWI chain from state 0: holding rate k + b/(b-1) in
  // state k; a jump is a branch event with probability k(b-1)/(k(b-1)+b)
  // (adding offspring - 1) and an immigration otherwise (adding the batch).
  JumpPath gwi(double horizon, Rng& rng);

  // Ancestral process on calendar times (-inf, t_min], t_min < 0, via the
  // GWI chain and the deterministic time change s -> -R_inv(s).
  JumpPath ancestral(double t_min, Rng& rng);

  // Direct inhomogeneous-rate sampler started from state 0 at t_start
  // (conditioning on M^0_{t_start} = 0); waiting times by exact inversion of
  // exp(-(n + b/(b-1)) (R(t') - R(t))). Kept as a cross-validation oracle for
  // the time-changed sampler.
  JumpPath ancestral_direct(double t_start, double t_end, std::int64_t max_jumps, Rng& rng);

  // Critical-case ancestral process of the families arriving after -T,
  // mapped from the same GWI chain by s -> -T e^{-s}.
  JumpPath gwi_critical(double T, double horizon, Rng& rng);

 private:
  JumpPath run_chain(double horizon, std::int64_t max_jumps, Rng& rng);

  StableMechanism mech_;
  SimulateOptions opts_;
  RecurrencePmfSampler offspring_;
  RecurrencePmfSampler immigration_;
};

// Martingale limit W = lim e^{-t/(b-1)} X_t: G^{1/(b-1)} * sigma with
// G ~ Gamma(b/(b-1), 1) and sigma positive (b-1)-stable, so that
// E[exp(-lambda W)] = (1 + lambda^{b-1})^{-b/(b-1)}. For b = 2 this is a
// plain Gamma(2, 1) variable.
double sample_W(const StableMechanism& mech, Rng& rng);

// Exact one-time marginal of the GWI chain: X_s is Poisson with mean
// (e^s - 1)^{1/(b-1)} W mixed over W (the ancestral count is Poisson(c(t)Z)
// given the population, and c(R_inv(s)) Z0 = (e^s-1)^{1/(b-1)} W). Returned
// as a double: for GWI times deep in the asymptotic regime the state exceeds
// integer range while e^{-s/(b-1)} X_s stays O(W).
double sample_gwi_state(const StableMechanism& mech, double s, Rng& rng);

// Family decomposition of the extant population: T_i are partial sums of
// Exp(b/(b-1)) clocks and scale*zeta_i = e^{-T_i/(b-1)} E_i^{1/(b-1)} sigma_i.
// Generation stops at max_count families or when e^{-T/(b-1)} < 1e-12.
FamilyDecomposition sample_family_decomposition(const StableMechanism& mech, int max_count,
                                                Rng& rng);

// Critical analogue: identical point process, scale recorded as c(T).
FamilyDecomposition sample_family_decomposition_critical(const StableMechanism& mech, double T,
                                                         int max_count, Rng& rng);

// Z0^(T) = c(T)^{-1} W for the critical mechanism (c(T) Z0^(T) and W share
// one distribution).
double sample_Z0_T(const StableMechanism& mech, double T, Rng& rng);

// Size-biased family fraction V = zeta_K / Z0: index K picked with
// probability proportional to the family size.
double size_biased_fraction(const FamilyDecomposition& families, Rng& rng);

}  // namespace stablegen
