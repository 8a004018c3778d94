#include "relmech/dynamics.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "relmech/detail/rk4.hpp"
#include "relmech/errors.hpp"

namespace relmech {

namespace {

constexpr double kOffShellWarning = 1e-8;

void check_state(int dim, const Vector& x, const Vector& u, const char* where) {
  if (x.size() != dim || u.size() != dim) {
    throw DimensionMismatch(fmt::format("{}: expected point and velocity of dimension {}", where, dim));
  }
}

}  // namespace

Matrix Connection::at(const Vector& x, const Vector& u) const {
  check_state(dim, x, u, "connection");
  Matrix k = coefficients(x, u);
  if (k.rows() != dim || k.cols() != dim) throw DimensionMismatch("connection: coefficients have the wrong shape");
  return k;
}

Matrix levi_civita_part(const MetricField& metric, const Vector& x, const Vector& u) {
  const Rank3 chr = christoffel_at(metric, x);
  const auto m = u.size();
  Matrix out(m, m);
  for (Eigen::Index mu = 0; mu < m; ++mu) out.row(mu) = (chr[static_cast<std::size_t>(mu)] * u).transpose();
  return out;
}

Connection connection_with_soldering(const MetricField& metric, Connection::CoefficientFn soldering) {
  Connection c;
  c.dim = metric.dim();
  c.coefficients = [metric, soldering](const Vector& x, const Vector& u) {
    return (levi_civita_part(metric, x, u) + soldering(x, u)).eval();
  };
  c.decomposition = Connection::Decomposition{metric, std::move(soldering)};
  return c;
}

Connection connection_from(const MetricField& metric, const PotentialField& potential, double mass, double charge) {
  if (metric.dim() != potential.dim()) {
    throw DimensionMismatch("connection_from: metric and potential dimensions differ");
  }
  if (!(mass > 0.0)) throw InvalidArgument("connection_from: mass must be positive");
  const double ratio = charge / mass;
  const int dim = metric.dim();
  Connection::CoefficientFn sigma;
  if (ratio == 0.0) {
    sigma = [dim](const Vector&, const Vector&) { return Matrix::Zero(dim, dim).eval(); };
  } else {
    sigma = [metric, potential, ratio](const Vector& x, const Vector&) {
      return (ratio * inverse_metric_at(metric, x) * faraday_at(potential, x)).eval();
    };
  }
  return connection_with_soldering(metric, std::move(sigma));
}

GeodesicConditionCheck check_geodesic_condition(const Connection& c, const MetricField& metric, const Vector& x,
                                                const Vector& u) {
  check_state(metric.dim(), x, u, "check_geodesic_condition");
  const Matrix g = metric.value(x);
  const Rank3 dg = metric.partials(x);
  const Matrix K = c.at(x, u);
  const auto m = u.size();

  GeodesicConditionCheck out;
  const Vector gu = g * u;
  for (Eigen::Index l = 0; l < m; ++l) {
    const double t1 = u[l] * u.dot(dg[static_cast<std::size_t>(l)] * u);
    out.residual += t1;
    out.scale += std::abs(t1);
  }
  const Vector Ku = K * u;
  for (Eigen::Index mu = 0; mu < m; ++mu) {
    const double t2 = 2.0 * gu[mu] * Ku[mu];
    out.residual += t2;
    out.scale += std::abs(t2);
  }
  if (c.decomposition) {
    out.soldering_residual = gu.dot(c.decomposition->soldering(x, u) * u);
  } else {
    out.soldering_residual = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

Vector geodesic_rhs(const Connection& c, const Vector& x, const Vector& u) { return c.at(x, u) * u; }

Vector project_to_shell(const GTensorField& gfield, const Vector& x, const Vector& u) {
  const double G = g_value(gfield, x, u);
  if (!(G > 0.0)) throw NonPositiveG(fmt::format("project_to_shell: G = {} is not positive", G));
  return u * std::pow(G, -1.0 / (2.0 * gfield.order_half()));
}

Trajectory integrate_second_order(const AccelerationFn& accel, const GTensorField& gfield, const FourState& s0,
                                  const IntegratorSettings& settings) {
  if (!(settings.dt > 0.0) || !std::isfinite(settings.dt)) throw InvalidArgument("integrator: dt must be positive");
  if (settings.steps < 1) throw InvalidArgument("integrator: steps must be at least 1");
  if (settings.record_every < 1) throw InvalidArgument("integrator: record_every must be at least 1");
  const int m = gfield.dim();
  check_state(m, s0.x, s0.u, "integrator");

  Trajectory out;
  out.metadata.integrator = "rk4";
  out.metadata.step = settings.dt;
  out.metadata.projection = settings.projection;

  const double G0 = g_value(gfield, s0.x, s0.u);
  if (!(G0 > 0.0)) throw NonPositiveG(fmt::format("integrator: initial G = {} is not positive", G0));
  if (std::abs(G0 - 1.0) > kOffShellWarning) {
    out.metadata.warnings.push_back(fmt::format("initial state is off shell: |G - 1| = {:.3e}", std::abs(G0 - 1.0)));
  }

  auto rhs = [&](const Vector& y) {
    Vector dy(2 * m);
    const Vector x = y.head(m);
    const Vector u = y.tail(m);
    dy.head(m) = u;
    dy.tail(m) = accel(x, u);
    return dy;
  };

  Vector y(2 * m);
  y.head(m) = s0.x;
  y.tail(m) = s0.u;
  out.samples.push_back({0.0, s0.x, s0.u, G0});
  double drift = std::abs(G0 - 1.0);
  double tau = 0.0;

  for (int step = 1; step <= settings.steps; ++step) {
    Vector next;
    double G = 0.0;
    try {
      next = detail::rk4_step(y, settings.dt, rhs);
      if (!detail::all_finite(next)) {
        throw StepRejected(fmt::format("integrator: non-finite state at step {}", step));
      }
      if (settings.projection == Projection::rescale) {
        next.tail(m) = project_to_shell(gfield, next.head(m), next.tail(m));
      }
      G = g_value(gfield, next.head(m), next.tail(m));
    } catch (Error& e) {
      e.last_good_tau = tau;
      throw;
    }
    y = std::move(next);
    tau = step * settings.dt;
    drift = std::max(drift, std::abs(G - 1.0));
    if (step % settings.record_every == 0 || step == settings.steps) {
      out.samples.push_back({tau, y.head(m), y.tail(m), G});
    }
  }
  out.metadata.max_constraint_drift = drift;
  return out;
}

Trajectory integrate_geodesic(const Connection& c, const GTensorField& gfield, const FourState& s0,
                              const IntegratorSettings& settings) {
  if (c.dim != gfield.dim()) throw DimensionMismatch("integrate_geodesic: connection and G field dimensions differ");
  return integrate_second_order([&c](const Vector& x, const Vector& u) { return geodesic_rhs(c, x, u); }, gfield,
                                s0, settings);
}

}  // namespace relmech
