#pragma once

#include <cstdint>
#include <random>

#include "spintop/minkowski.hpp"

namespace spintop {

/// Seeded generator with platform-independent real draws (std distributions
/// are implementation-defined; bit arithmetic below is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1) with 53-bit resolution.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * unit(); }

  std::uint64_t raw() { return gen_(); }

  /// Uniform direction on the unit sphere.
  Vec3 direction() {
    const double z = uniform(-1.0, 1.0);
    const double ph = uniform(0.0, 6.283185307179586476925286766559);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(ph), r * std::sin(ph), z};
  }

  /// Uniform in the ball of given radius.
  Vec3 ball(double radius) {
    const Vec3 d = direction();
    const double r = radius * std::cbrt(unit());
    return {r * d.x, r * d.y, r * d.z};
  }

 private:
  std::mt19937_64 gen_;
};

/// Van der Corput radical inverse in the given base.
inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

/// 2-d Halton sequence (bases 2 and 3); the seed offsets the index so that
/// different seeds walk different low-discrepancy point sets.
class Halton2 {
 public:
  explicit Halton2(std::uint64_t seed) : i_(seed * 0x9e3779b9u + 1) {}

  std::pair<double, double> next() {
    const std::uint64_t i = i_++;
    return {radical_inverse(i, 2), radical_inverse(i, 3)};
  }

 private:
  std::uint64_t i_;
};

}  // namespace spintop
