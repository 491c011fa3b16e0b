#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace betasigma::rng {

/// SplitMix64 step. Small, fast, and good enough to expand seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a base seed, so repetitions can
/// draw from disjoint streams no matter how they are scheduled.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t s = base + 0x9E3779B97F4A7C15ull * (stream + 1);
  std::uint64_t a = splitmix64(s);
  return a ^ splitmix64(s);
}

/// xoshiro256++ (Blackman and Vigna), seeded through SplitMix64. The output
/// stream is fixed by the seed alone, independent of platform or standard
/// library.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next() {
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

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

/// Standard normal deviates via the Box-Muller transform.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : gen_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - gen_.uniform();  // (0, 1], keeps the log finite
    const double u2 = gen_.uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  Xoshiro256pp& engine() { return gen_; }

 private:
  Xoshiro256pp gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace betasigma::rng
