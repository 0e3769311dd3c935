#pragma once

#include <cmath>
#include <cstdint>

namespace itmsim {

/**
 * Deterministic 64-bit generator behind every random draw in a run.
 *
 * The seed is mixed once through splitmix64 so that seed 0 and adjacent
 * small seeds still yield well-spread internal states, then the state
 * evolves by the xorshift64* recurrence:
 *
 *   x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;
 *   output = x * 0x2545F4914F6CDD1D
 *
 * The same seed produces the same sequence on every platform with 64-bit
 * integers; all derived draws (bounded ints, unit doubles, Bernoulli,
 * Poisson) are defined purely in terms of next_u64(), so they inherit the
 * guarantee.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { reseed(seed); }

  void reseed(std::uint64_t seed) {
    // splitmix64 finalizer; maps 0 to a non-zero state.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    state_ = z != 0 ? z : 0x9E3779B97F4A7C15ull;
  }

  std::uint64_t next_u64() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545F4914F6CDD1Dull;
  }

  /// Uniform in [0, n). n must be > 0. Fixed-point scaling, platform-stable.
  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double() < p; }

  /// Knuth's product-of-uniforms Poisson sampler; fine for small means.
  std::uint32_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    std::uint32_t k = 0;
    double prod = 1.0;
    do {
      ++k;
      prod *= next_double();
    } while (prod > limit);
    return k - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace itmsim
