#pragma once

#include <functional>
#include <optional>

#include "relmech/geometry.hpp"
#include "relmech/kinematics.hpp"
#include "relmech/trajectory.hpp"

namespace relmech {

/// Connection on TX given by coefficients K(mu, l) = K^mu_l(x, u); its
/// geodesic equation is a^mu = K^mu_l u^l.
struct Connection {
  using CoefficientFn = std::function<Matrix(const Vector&, const Vector&)>;

  /// Levi-Civita part of a metric plus a soldering form sigma^mu_l(x, u).
  struct Decomposition {
    MetricField metric;
    CoefficientFn soldering;
  };

  int dim = 0;
  CoefficientFn coefficients;
  std::optional<Decomposition> decomposition;

  Matrix at(const Vector& x, const Vector& u) const;
};

/// K^mu_l = {_l^mu_n} u^n + (charge/mass) g^{mu n} F_{n l}, decomposed with
/// sigma^mu_l = (charge/mass) g^{mu n} F_{n l}.
Connection connection_from(const MetricField& metric, const PotentialField& potential, double mass, double charge);

/// K^mu_l = {_l^mu_n} u^n + sigma^mu_l(x, u).
Connection connection_with_soldering(const MetricField& metric, Connection::CoefficientFn soldering);

/// Levi-Civita part evaluated at (x, u): L(mu, l) = {_l^mu_n} u^n.
Matrix levi_civita_part(const MetricField& metric, const Vector& x, const Vector& u);

struct GeodesicConditionCheck {
  /// (d_l g_{mn} u^m + 2 g_{mn} K^m_l) u^l u^n
  double residual = 0.0;
  /// Sum of the magnitudes of the terms entering `residual`.
  double scale = 0.0;
  /// g_{mn} sigma^m_l u^l u^n; NaN when the connection has no decomposition.
  double soldering_residual = 0.0;
};

/// Condition under which the geodesic flow of `c` preserves g(u, u) = 1.
GeodesicConditionCheck check_geodesic_condition(const Connection& c, const MetricField& metric, const Vector& x,
                                                const Vector& u);

/// a^mu = K^mu_l(x, u) u^l.
Vector geodesic_rhs(const Connection& c, const Vector& x, const Vector& u);

/// u G(x, u)^{-1/2N}; throws NonPositiveG if G <= 0.
Vector project_to_shell(const GTensorField& gfield, const Vector& x, const Vector& u);

struct IntegratorSettings {
  double dt = 0.0;
  int steps = 0;
  Projection projection = Projection::none;
  int record_every = 1;
};

using AccelerationFn = std::function<Vector(const Vector&, const Vector&)>;

/// RK4 on (x', u') = (u, accel(x, u)); G is monitored with `gfield`. Records
/// the initial state, every `record_every`-th step and the final step.
/// Throws DomainError when the state leaves the field domain and
/// StepRejected on a non-finite state, both carrying the last good tau.
Trajectory integrate_second_order(const AccelerationFn& accel, const GTensorField& gfield, const FourState& s0,
                                  const IntegratorSettings& settings);

Trajectory integrate_geodesic(const Connection& c, const GTensorField& gfield, const FourState& s0,
                              const IntegratorSettings& settings);

}  // namespace relmech
