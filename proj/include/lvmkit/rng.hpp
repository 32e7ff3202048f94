#pragma once

#include <cstdint>
#include <random>

#include "lvmkit/core.hpp"

namespace lvmkit {

/// Seeded generator with platform-independent draws (the std distributions are not).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  Complex in_square(double r) { return {uniform(-r, r), uniform(-r, r)}; }
  /// Uniform in the disc |z - 1| < r.
  Complex near_one(double r) {
    for (;;) {
      const Complex z = in_square(r);
      if (std::abs(z) < r) return 1.0 + z;
    }
  }
  /// Modulus uniform in [lo, hi], argument uniform.
  Complex annulus(double lo, double hi) { return std::polar(uniform(lo, hi), uniform(-kPi, kPi)); }
  /// Point of C^2 with uniform direction and norm uniform in [lo, hi].
  std::array<Complex, 2> sphere2(double lo, double hi) {
    for (;;) {
      double x[4];
      double n2 = 0.0;
      for (double& v : x) {
        v = uniform(-1.0, 1.0);
        n2 += v * v;
      }
      if (n2 > 1.0 || n2 < 1e-6) continue;
      const double s = uniform(lo, hi) / std::sqrt(n2);
      return {Complex(x[0] * s, x[1] * s), Complex(x[2] * s, x[3] * s)};
    }
  }

private:
  std::mt19937_64 eng_;
};

} // namespace lvmkit
