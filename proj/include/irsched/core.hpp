#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace irsched {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Wraps an angle to the canonical range [0, 2*pi).
inline double canonical_angle(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  if (y >= kTwoPi) y = 0.0;
  return y;
}

/// Shortest angular distance between two angles on the circle.
inline double circular_distance(double a, double b) {
  double d = std::fabs(canonical_angle(a) - canonical_angle(b));
  return d <= kTwoPi - d ? d : kTwoPi - d;
}

/// Per-element IRS phase shifts, each stored in [0, 2*pi).
struct IrsConfiguration {
  std::vector<double> theta;

  IrsConfiguration() = default;
  explicit IrsConfiguration(std::vector<double> t) : theta(std::move(t)) {}

  static IrsConfiguration zeros(std::size_t n) {
    return IrsConfiguration(std::vector<double>(n, 0.0));
  }

  std::size_t size() const { return theta.size(); }
  double operator[](std::size_t i) const { return theta[i]; }
  double& operator[](std::size_t i) { return theta[i]; }

  bool operator==(const IrsConfiguration&) const = default;

  bool is_canonical() const {
    for (double t : theta)
      if (!(t >= 0.0 && t < kTwoPi)) return false;
    return true;
  }
};

/// Transmit signal power and receiver noise power, both in watts.
struct Powers {
  double signal_power = 1.0;
  double noise_power = 1.0;
};

}  // namespace irsched
