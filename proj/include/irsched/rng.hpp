#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "irsched/core.hpp"

namespace irsched {

/// splitmix64 mix of (master, stream); derives independent substream seeds.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// mt19937_64 plus explicit uniform/gaussian transforms. The standard pins
/// the generator's output sequence; the distributions in <random> are
/// implementation-defined, so the transforms live here instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; the paired draw is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    has_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  /// Circularly symmetric complex gaussian, unit variance.
  std::complex<double> complex_gaussian() {
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    double re = gaussian();
    double im = gaussian();
    return {re * kInvSqrt2, im * kInvSqrt2};
  }

  /// Unbiased uniform integer in [0, n), n >= 1.
  std::size_t below(std::size_t n) {
    std::uint64_t nn = static_cast<std::uint64_t>(n);
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % nn;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % nn);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace irsched
