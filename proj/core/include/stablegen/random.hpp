#pragma once

#include <array>
#include <cstdint>

namespace stablegen {

// Identifies one reproducible random stream. Identical (seed, stream) pairs
// reproduce identical draws bit-for-bit on a given build; distinct stream ids
// give statistically independent streams (each stream's state is derived by a
// full SplitMix64 expansion of the pair, the seeding scheme recommended for
// xoshiro-family generators).
struct RandomSource {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// xoshiro256++ with SplitMix64 stream derivation.
class Rng {
 public:
  explicit Rng(RandomSource src);
  Rng(std::uint64_t seed, std::uint64_t stream) : Rng(RandomSource{seed, stream}) {}

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  // Uniform on (0, 1); never returns an endpoint.
  double uniform_open();

  double exponential(double rate = 1.0);
  double normal();
  // Gamma(shape, 1), shape >= 1 (Marsaglia-Tsang).
  double gamma(double shape);
  // Poisson(mean) returned as a double so astronomically large means remain
  // representable; exact for mean <= 1e12, Gaussian beyond (total-variation
  // error O(mean^{-1/2})).
  double poisson(double mean);

 private:
  std::array<std::uint64_t, 4> state_;
};

// Draws sigma with E[exp(-x sigma)] = exp(-x^index) for index in (0,1), by
// Kanter's exact transform of a uniform and an exponential. index == 1 is the
// degenerate unit constant.
double sample_positive_stable(double index, Rng& rng);

}  // namespace stablegen
