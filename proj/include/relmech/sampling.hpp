#pragma once

#include <cstdint>
#include <random>

#include "relmech/geometry.hpp"

namespace relmech {

/// Seeded generator with a platform-independent double conversion.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) from the top 53 bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  Vector uniform_vector(Eigen::Index n, double lo, double hi);

 private:
  std::mt19937_64 engine_;
};

/// Random point inside the chart domain of a catalog metric. Schwarzschild
/// points have r in [3M, 30M] and theta in [0.3, pi - 0.3]; other metrics
/// use coordinates in [-5, 5].
Vector sample_point(const MetricField& metric, Rng& rng);

/// Random velocity with G(x, u) = 1 by rejection sampling and rescaling.
/// Draws are kept when G(u) exceeds a tenth of G(u^0, 0, .., 0), which caps
/// the boost (|v| < 0.95 for Minkowski). Throws ConstraintUnreachable after 1000 rejected draws.
Vector sample_shell_velocity(const GTensorField& gfield, const Vector& x, Rng& rng);

}  // namespace relmech
