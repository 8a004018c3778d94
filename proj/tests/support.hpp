#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "relmech/dynamics.hpp"
#include "relmech/geometry.hpp"
#include "relmech/lagrangian.hpp"
#include "relmech/sampling.hpp"

namespace relmech::oracle {

/// Fourth-order central difference of a scalar function.
inline double fd4(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

/// Textbook Christoffel symbols of Schwarzschild, out[l](m, n) = Gamma^l_{mn}.
inline Rank3 schwarzschild_gamma(double M, const Vector& x) {
  const double r = x[1];
  const double th = x[2];
  Rank3 G(4, Matrix::Zero(4, 4));
  auto set = [&](int l, int m, int n, double v) {
    G[l](m, n) = v;
    G[l](n, m) = v;
  };
  set(0, 0, 1, M / (r * (r - 2 * M)));
  set(1, 0, 0, M * (r - 2 * M) / (r * r * r));
  set(1, 1, 1, -M / (r * (r - 2 * M)));
  set(1, 2, 2, -(r - 2 * M));
  set(1, 3, 3, -(r - 2 * M) * std::sin(th) * std::sin(th));
  set(2, 1, 2, 1.0 / r);
  set(2, 3, 3, -std::sin(th) * std::cos(th));
  set(3, 1, 3, 1.0 / r);
  set(3, 2, 3, std::cos(th) / std::sin(th));
  return G;
}

/// Euler-Lagrange operator dL/dx - d/dtau dL/du at the jet (x, u, a), by
/// finite differences of lagrangian_value alone. The total derivative is
/// taken along x(t) = x + u t + a t^2 / 2.
inline Vector fd_lagrange_operator(const LagrangianModel& model, const Vector& x, const Vector& u, const Vector& a,
                                   double h_inner = 1e-3, double h_outer = 1e-2) {
  const auto m = x.size();
  auto momentum = [&](const Vector& xx, const Vector& uu, Eigen::Index b) {
    return fd4(
        [&](double s) {
          Vector w = uu;
          w[b] += s;
          return lagrangian_value(model, xx, w);
        },
        0.0, h_inner * std::max(1e-2, std::abs(uu[b])));
  };
  Vector out(m);
  for (Eigen::Index b = 0; b < m; ++b) {
    const double dldx = fd4(
        [&](double s) {
          Vector y = x;
          y[b] += s;
          return lagrangian_value(model, y, u);
        },
        0.0, h_inner * std::max(1.0, std::abs(x[b])));
    const double dpdt = fd4(
        [&](double t) { return momentum((x + u * t + 0.5 * a * t * t).eval(), (u + a * t).eval(), b); }, 0.0,
        h_outer / std::max(1.0, u.norm()));
    out[b] = dldx - dpdt;
  }
  return out;
}

/// Fully symmetric rank-4 tensor sym(g (x) g) + eps * random symmetric part.
inline DenseTensor quartic_tensor(const Matrix& g, double eps, std::uint64_t seed) {
  const DenseTensor g2 = DenseTensor::from_matrix(g);
  DenseTensor t = DenseTensor::outer(g2, g2);
  DenseTensor noise(static_cast<int>(g.rows()), 4);
  Rng rng(seed);
  for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = rng.uniform(-eps, eps);
  return (t + noise).symmetrized();
}

/// Cubic Hermite estimate of where f crosses `level` in [t0, t1] given end
/// values and derivatives, refined by bisection on the interpolant.
inline double hermite_crossing(double t0, double f0, double d0, double t1, double f1, double d1, double level) {
  const double h = t1 - t0;
  auto p = [&](double t) {
    const double s = (t - t0) / h;
    const double h00 = 2 * s * s * s - 3 * s * s + 1;
    const double h10 = s * s * s - 2 * s * s + s;
    const double h01 = -2 * s * s * s + 3 * s * s;
    const double h11 = s * s * s - s * s;
    return h00 * f0 + h10 * h * d0 + h01 * f1 + h11 * h * d1 - level;
  };
  double lo = t0;
  double hi = t1;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((p(lo) <= 0) == (p(mid) <= 0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Shell four-velocity of an equatorial circular orbit with angular
/// frequency omega at radius r.
inline Vector circular_velocity(const MetricField& metric, double r, double omega) {
  Vector x = Vector::Zero(4);
  x[1] = r;
  x[2] = std::acos(0.0);
  Vector u(4);
  u << 1.0, 0.0, 0.0, omega;
  const double G = u.dot(metric.value(x) * u);
  return u / std::sqrt(G);
}

/// Angular frequency at which the radial component of the geodesic rhs
/// vanishes, found by bracketing root search in [lo, hi].
inline double circular_omega(const Connection& c, const MetricField& metric, double r, double lo, double hi) {
  Vector x = Vector::Zero(4);
  x[1] = r;
  x[2] = std::acos(0.0);
  auto radial = [&](double omega) { return geodesic_rhs(c, x, circular_velocity(metric, r, omega))[1]; };
  boost::uintmax_t iters = 200;
  const auto bracket =
      boost::math::tools::toms748_solve(radial, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (bracket.first + bracket.second);
}

/// Coordinate time at which the orbit first reaches phi = phi0 + 2 pi.
inline double coordinate_period(const Trajectory& tr) {
  const double target = tr.samples.front().x[3] + 2.0 * std::acos(-1.0);
  for (std::size_t k = 1; k < tr.samples.size(); ++k) {
    const TrajectorySample& a = tr.samples[k - 1];
    const TrajectorySample& b = tr.samples[k];
    if (a.x[3] < target && b.x[3] >= target) {
      const double tau = hermite_crossing(a.tau, a.x[3], a.u[3], b.tau, b.x[3], b.u[3], target);
      const double h = b.tau - a.tau;
      const double s = (tau - a.tau) / h;
      const double h00 = 2 * s * s * s - 3 * s * s + 1;
      const double h10 = s * s * s - 2 * s * s + s;
      const double h01 = -2 * s * s * s + 3 * s * s;
      const double h11 = s * s * s - s * s;
      return h00 * a.x[0] + h10 * h * a.u[0] + h01 * b.x[0] + h11 * h * b.u[0] - tr.samples.front().x[0];
    }
  }
  return std::nan("");
}

}  // namespace relmech::oracle
