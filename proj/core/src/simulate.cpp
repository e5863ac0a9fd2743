#include "stablegen/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stablegen {

namespace {

constexpr double kFamilyTailCutoff = 1e-12;

void require_sub_critical(const StableMechanism& mech, const char* what) {
  if (mech.regime != Regime::SubCritical) {
    throw UnsupportedRegimeError(std::string(what) + " needs a sub-critical mechanism");
  }
}

}  // namespace

std::int64_t JumpPath::state_at(double time) const {
  // Last jump with times[i] <= time; 0 before the first jump.
  auto it = std::upper_bound(times.begin(), times.end(), time);
  if (it == times.begin()) {
    return 0;
  }
  return states[static_cast<std::size_t>(it - times.begin()) - 1];
}

double FamilyDecomposition::total() const {
  double sum = 0.0;
  for (double size : sizes) {
    sum += size;
  }
  return sum;
}

RecurrencePmfSampler::RecurrencePmfSampler(std::int64_t first, double first_mass,
                                           double ratio_shift)
    : first_(first), ratio_shift_(ratio_shift), last_mass_(first_mass) {
  cumulative_.push_back(first_mass);
}

void RecurrencePmfSampler::extend(std::int64_t target) {
  while (static_cast<std::int64_t>(cumulative_.size()) < target) {
    const double n = static_cast<double>(first_ + static_cast<std::int64_t>(cumulative_.size()) - 1);
    last_mass_ *= (n - ratio_shift_) / (n + 1.0);
    cumulative_.push_back(cumulative_.back() + last_mass_);
  }
}

double RecurrencePmfSampler::pmf(std::int64_t n) const {
  if (n < first_) {
    return 0.0;
  }
  double mass = cumulative_.front();
  for (std::int64_t j = first_; j < n; ++j) {
    mass *= (static_cast<double>(j) - ratio_shift_) / static_cast<double>(j + 1);
  }
  return mass;
}

std::int64_t RecurrencePmfSampler::sample(Rng& rng, std::int64_t value_cap, bool* saturated) {
  const double u = rng.uniform();
  if (saturated != nullptr) {
    *saturated = false;
  }
  while (u >= cumulative_.back()) {
    if (last_mass_ == 0.0 || first_ + static_cast<std::int64_t>(cumulative_.size()) > value_cap) {
      if (saturated != nullptr) {
        *saturated = true;
      }
      return value_cap;
    }
    extend(static_cast<std::int64_t>(cumulative_.size()) * 2);
  }
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return first_ + static_cast<std::int64_t>(it - cumulative_.begin());
}

Simulator::Simulator(const StableMechanism& mech, SimulateOptions opts)
    : mech_(mech),
      opts_(opts),
      // p_2 = b/2 with p_{n+1} = p_n (n-b)/(n+1); q_1 = b-1 with
      // q_{n+1} = q_n (n-(b-1))/(n+1). For b = 2 both recurrences terminate
      // exactly (offspring always 2, batches always 1).
      offspring_(2, mech.b / 2.0, mech.b),
      immigration_(1, mech.b - 1.0, mech.b - 1.0) {}

std::int64_t Simulator::sample_offspring(Rng& rng) {
  bool saturated = false;
  const std::int64_t value = offspring_.sample(rng, opts_.state_cap, &saturated);
  return value;
}

std::int64_t Simulator::sample_immigration_size(Rng& rng) {
  bool saturated = false;
  const std::int64_t value = immigration_.sample(rng, opts_.state_cap, &saturated);
  return value;
}

JumpPath Simulator::run_chain(double horizon, std::int64_t max_jumps, Rng& rng) {
  JumpPath path;
  path.origin = PathOrigin::GwiClock;
  const double immigration_rate = mech_.b / (mech_.b - 1.0);
  std::int64_t state = 0;
  double clock = 0.0;
  for (;;) {
    const double total_rate = static_cast<double>(state) + immigration_rate;
    clock += rng.exponential(total_rate);
    if (clock > horizon) {
      break;
    }
    bool saturated = false;
    std::int64_t jump;
    if (rng.uniform() * total_rate < static_cast<double>(state)) {
      jump = offspring_.sample(rng, opts_.state_cap, &saturated) - 1;
    } else {
      jump = immigration_.sample(rng, opts_.state_cap, &saturated);
    }
    state += jump;
    path.times.push_back(clock);
    path.states.push_back(state);
    if (saturated || state >= opts_.state_cap ||
        static_cast<std::int64_t>(path.times.size()) >= max_jumps) {
      path.truncated = true;
      break;
    }
  }
  return path;
}

JumpPath Simulator::gwi(double horizon, Rng& rng) {
  require_sub_critical(mech_, "Simulator::gwi");
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("Simulator::gwi: horizon must be positive");
  }
  return run_chain(horizon, opts_.max_jumps, rng);
}

JumpPath Simulator::ancestral(double t_min, Rng& rng) {
  require_sub_critical(mech_, "Simulator::ancestral");
  if (!(t_min < 0.0)) {
    throw std::invalid_argument("Simulator::ancestral: t_min must be negative");
  }
  JumpPath path = run_chain(time_change_R(mech_, -t_min), opts_.max_jumps, rng);
  for (double& time : path.times) {
    time = -time_change_R_inv(mech_, time);
  }
  path.origin = PathOrigin::AncestralCalendar;
  return path;
}

JumpPath Simulator::ancestral_direct(double t_start, double t_end, std::int64_t max_jumps,
                                     Rng& rng) {
  require_sub_critical(mech_, "Simulator::ancestral_direct");
  if (!(t_start < t_end && t_end < 0.0)) {
    throw std::invalid_argument("Simulator::ancestral_direct: need t_start < t_end < 0");
  }
  JumpPath path;
  path.origin = PathOrigin::AncestralCalendar;
  const double immigration_rate = mech_.b / (mech_.b - 1.0);
  const double gwi_end = time_change_R(mech_, -t_end);
  double gwi_clock = time_change_R(mech_, -t_start);
  std::int64_t state = 0;
  for (;;) {
    const double total_rate = static_cast<double>(state) + immigration_rate;
    gwi_clock += rng.exponential(total_rate);
    if (gwi_clock >= gwi_end) {
      break;
    }
    bool saturated = false;
    std::int64_t jump;
    if (rng.uniform() * total_rate < static_cast<double>(state)) {
      jump = offspring_.sample(rng, opts_.state_cap, &saturated) - 1;
    } else {
      jump = immigration_.sample(rng, opts_.state_cap, &saturated);
    }
    state += jump;
    path.times.push_back(-time_change_R_inv(mech_, gwi_clock));
    path.states.push_back(state);
    if (saturated || state >= opts_.state_cap ||
        static_cast<std::int64_t>(path.times.size()) >= max_jumps) {
      path.truncated = true;
      break;
    }
  }
  return path;
}

JumpPath Simulator::gwi_critical(double T, double horizon, Rng& rng) {
  if (mech_.regime != Regime::Critical) {
    throw UnsupportedRegimeError("Simulator::gwi_critical needs a critical mechanism");
  }
  if (!(T > 0.0) || !(horizon > 0.0)) {
    throw std::invalid_argument("Simulator::gwi_critical: need T > 0 and horizon > 0");
  }
  JumpPath path = run_chain(horizon, opts_.max_jumps, rng);
  for (double& time : path.times) {
    time = -T * std::exp(-time);
  }
  path.origin = PathOrigin::CriticalCalendar;
  return path;
}

double sample_W(const StableMechanism& mech, Rng& rng) {
  const double eta = mech.eta();
  const double gamma_part = rng.gamma(mech.b / eta);
  const double stable_part = sample_positive_stable(eta, rng);
  return std::pow(gamma_part, 1.0 / eta) * stable_part;
}

double sample_gwi_state(const StableMechanism& mech, double s, Rng& rng) {
  if (!(s > 0.0)) {
    throw std::invalid_argument("sample_gwi_state: s must be positive");
  }
  const double w = sample_W(mech, rng);
  const double mean = std::exp(detail::log_expm1(s) / mech.eta() + std::log(w));
  return rng.poisson(mean);
}

namespace {

FamilyDecomposition sample_families(const StableMechanism& mech, int max_count, Rng& rng,
                                    double scale) {
  if (max_count < 1) {
    throw std::invalid_argument("sample_family_decomposition: count must be >= 1");
  }
  const double eta = mech.eta();
  const double clock_rate = mech.b / eta;
  FamilyDecomposition families;
  families.scale = scale;
  double clock = 0.0;
  for (int k = 0; k < max_count; ++k) {
    clock += rng.exponential(clock_rate);
    const double discount = std::exp(-clock / eta);
    if (discount < kFamilyTailCutoff) {
      break;
    }
    const double w = std::pow(rng.exponential(), 1.0 / eta) * sample_positive_stable(eta, rng);
    families.immigration_clocks.push_back(clock);
    families.sizes.push_back(discount * w);
  }
  families.tail_factor = families.immigration_clocks.empty()
                             ? 1.0
                             : std::exp(-families.immigration_clocks.back() / eta);
  return families;
}

}  // namespace

FamilyDecomposition sample_family_decomposition(const StableMechanism& mech, int max_count,
                                                Rng& rng) {
  require_sub_critical(mech, "sample_family_decomposition");
  return sample_families(mech, max_count, rng, kappa(mech));
}

FamilyDecomposition sample_family_decomposition_critical(const StableMechanism& mech, double T,
                                                         int max_count, Rng& rng) {
  if (mech.regime != Regime::Critical) {
    throw UnsupportedRegimeError("sample_family_decomposition_critical needs a critical mechanism");
  }
  return sample_families(mech, max_count, rng, extinction_c(mech, T));
}

double sample_Z0_T(const StableMechanism& mech, double T, Rng& rng) {
  if (mech.regime != Regime::Critical) {
    throw UnsupportedRegimeError("sample_Z0_T needs a critical mechanism");
  }
  if (!(T > 0.0)) {
    throw std::invalid_argument("sample_Z0_T: T must be positive");
  }
  return sample_W(mech, rng) / extinction_c(mech, T);
}

double size_biased_fraction(const FamilyDecomposition& families, Rng& rng) {
  const double total = families.total();
  if (!(total > 0.0)) {
    throw std::invalid_argument("size_biased_fraction: empty decomposition");
  }
  double target = rng.uniform() * total;
  for (double size : families.sizes) {
    target -= size;
    if (target <= 0.0) {
      return size / total;
    }
  }
  return families.sizes.back() / total;
}

}  // namespace stablegen
