#include "stablegen/random.hpp"

#include <cmath>
#include <stdexcept>

namespace stablegen {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(RandomSource src) {
  std::uint64_t x = src.seed;
  (void)splitmix64(x);
  x ^= 0xd1b54a32d192ed03ULL * (src.stream + 1);
  for (auto& word : state_) {
    word = splitmix64(x);
  }
  // An all-zero state is the one forbidden xoshiro state.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
    state_[0] = 0x853c49e6748fea9bULL;
  }
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
  // (v + 0.5) / 2^53 lies in (0, 1) strictly.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::exponential(double rate) {
  return -std::log(uniform_open()) / rate;
}

double Rng::normal() {
  const double u1 = uniform_open();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

double Rng::gamma(double shape) {
  if (shape < 1.0) {
    throw std::invalid_argument("Rng::gamma requires shape >= 1");
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) {
      return d * v;
    }
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

double Rng::poisson(double mean) {
  if (mean < 0.0 || !std::isfinite(mean)) {
    if (std::isinf(mean)) {
      return mean;
    }
    throw std::invalid_argument("Rng::poisson requires mean >= 0");
  }
  if (mean < 30.0) {
    // Inversion by multiplication.
    const double limit = std::exp(-mean);
    double prod = 1.0;
    double k = -1.0;
    do {
      prod *= uniform_open();
      k += 1.0;
    } while (prod > limit);
    return k;
  }
  if (mean <= 1e12) {
    // Hormann's PTRS transformed-rejection sampler; exact for all tested means.
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mu = std::log(mean);
    for (;;) {
      double u = uniform() - 0.5;
      const double v = uniform_open();
      const double us = 0.5 - std::fabs(u);
      const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
      if (us >= 0.07 && v <= v_r) {
        return k;
      }
      if (k < 0.0 || (us < 0.013 && v > us)) {
        continue;
      }
      if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
          -mean + k * log_mu - std::lgamma(k + 1.0)) {
        return k;
      }
    }
  }
  // Gaussian limit; the skewness correction is below double resolution here.
  return std::floor(mean + std::sqrt(mean) * normal() + 0.5);
}

double sample_positive_stable(double index, Rng& rng) {
  if (!(index > 0.0) || index > 1.0) {
    throw std::domain_error("sample_positive_stable: index must lie in (0, 1]");
  }
  if (index == 1.0) {
    return 1.0;
  }
  const double a = index;
  const double u = rng.uniform_open() * 3.14159265358979323846;
  const double e = rng.exponential();
  // Zolotarev's function, assembled in log space to dodge under/overflow.
  const double log_kanter = (a * std::log(std::sin(a * u)) +
                             (1.0 - a) * std::log(std::sin((1.0 - a) * u)) -
                             std::log(std::sin(u))) /
                            (1.0 - a);
  return std::exp(((1.0 - a) / a) * (log_kanter - std::log(e)));
}

}  // namespace stablegen
