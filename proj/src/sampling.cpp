#include "relmech/sampling.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "relmech/errors.hpp"

namespace relmech {

Vector Rng::uniform_vector(Eigen::Index n, double lo, double hi) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
  return v;
}

Vector sample_point(const MetricField& metric, Rng& rng) {
  if (metric.kind() == MetricKind::schwarzschild) {
    const double M = metric.mass_parameter();
    Vector x(4);
    x[0] = rng.uniform(-5.0, 5.0);
    x[1] = rng.uniform(3.0 * M, 30.0 * M);
    x[2] = rng.uniform(0.3, std::numbers::pi - 0.3);
    x[3] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return x;
  }
  return rng.uniform_vector(metric.dim(), -5.0, 5.0);
}

Vector sample_shell_velocity(const GTensorField& gfield, const Vector& x, Rng& rng) {
  const double inv = -1.0 / (2.0 * gfield.order_half());
  // Scale each component by the diagonal entry G_{i..i} so the draws are
  // comparable in magnitude across coordinates.
  const DenseTensor tensor = gfield.value(x);
  const int m = gfield.dim();
  Vector scale(m);
  for (int i = 0; i < m; ++i) {
    std::vector<int> idx(static_cast<std::size_t>(tensor.rank()), i);
    const double d = std::abs(tensor.at(idx));
    scale[i] = d > 0.0 ? std::pow(d, inv) : 1.0;
  }
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Vector u = rng.uniform_vector(m, -1.0, 1.0);
    u[0] = rng.uniform(1.0, 3.0);
    u = u.cwiseProduct(scale);
    // bounded boost: G must keep a tenth of its value without the spatial part
    Vector rest = Vector::Zero(m);
    rest[0] = u[0];
    const double G = g_value(gfield, x, u);
    if (G > std::max(1e-3, 0.1 * g_value(gfield, x, rest))) return u * std::pow(G, inv);
  }
  throw ConstraintUnreachable("sample_shell_velocity: no velocity with G > 0 found");
}

}  // namespace relmech
