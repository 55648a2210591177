#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace thermolab {

// Counter-based pseudo random number generator (SplitMix64).
//
// The stream for a seed s is out_i = mix64(s + (i+1)*GOLDEN), i = 0,1,2,...
// where mix64 is the SplitMix64 finalizer. The generator is stateless apart
// from the counter, so identical (seed, counter) pairs reproduce identical
// values on every platform and independent of threading.
//
// Sub-streams for parallel sampling are derived as
//   substream(s, j).seed = mix64(mix64(s) + j)
// which decorrelates realization/sample indices from the parent stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), counter_(0) {}

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    counter_ += 1;
    return mix64(seed_ + counter_ * 0x9E3779B97F4A7C15ull);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Unbiased integer in [0, n) via Lemire's multiply-shift rejection.
  std::uint64_t uniform_int(std::uint64_t n) {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    std::uint64_t l = static_cast<std::uint64_t>(m);
    if (l < n) {
      std::uint64_t t = (-n) % n;
      while (l < t) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        l = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Standard normal via the polar Box-Muller transform.
  double gaussian() {
    if (have_cache_) {
      have_cache_ = false;
      return cache_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cache_ = v * f;
    have_cache_ = true;
    return u * f;
  }

  Rng substream(std::uint64_t index) const { return Rng(mix64(mix64(seed_) + index)); }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
  double cache_ = 0.0;
  bool have_cache_ = false;
};

}  // namespace thermolab
