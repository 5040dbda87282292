#pragma once

// Seeded sampling with a platform-independent mapping from engine output to
// reals (std distributions differ across standard libraries).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "geqn/types.hpp"

namespace geqn {

inline constexpr std::uint64_t kDefaultSeed = 42;

class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Vector unit_vector(Eigen::Index n) {
    Vector v(n);
    do {
      for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
    } while (v.norm() == 0.0);
    return v / v.norm();
  }

  /// Uniform point in the open ball B(center, radius).
  Vector in_ball(const Vector& center, double radius) {
    const auto n = center.size();
    const double scale = radius * std::pow(uniform(), 1.0 / static_cast<double>(n));
    return center + scale * unit_vector(n);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace geqn
