#pragma once

#include <functional>
#include <vector>

#include "relmech/geometry.hpp"
#include "relmech/trajectory.hpp"

namespace relmech {

/// Point x^l of the configuration space with a four-velocity u^l = dx^l/dtau.
struct FourState {
  Vector x;
  Vector u;
};

/// Chart-local coordinates (q^0, q^i, q^i_0) of the three-velocity space.
struct ThreeVelocity {
  double q0 = 0.0;
  Vector q;  ///< q^1 .. q^{m-1}
  Vector v;  ///< q^i_0 = dq^i/dq^0

  int dim() const { return static_cast<int>(q.size()) + 1; }
  /// Full point (q^0, q^1, ..., q^{m-1}).
  Vector point() const;
};

/// Coordinate change q' = map(q) with its Jacobian J(l, m) = dq'^l/dq^m.
struct ChartTransition {
  std::function<Vector(const Vector&)> map;
  std::function<Matrix(const Vector&)> jacobian;

  static ChartTransition identity(int dim);
  /// Linear Lorentz boost of rapidity alpha mixing q^0 and q^1.
  static ChartTransition lorentz_boost(double alpha, int dim = 4);
};

/// v^i = u^i / u^0. Throws ZeroTimeVelocity if |u^0| < 1e-300.
ThreeVelocity three_from_four(const FourState& s);

/// Four-velocity on the shell G = 1 in the jet of (1, v):
/// u^0 = sign * Gbar^{-1/2N} with Gbar = G(x, (1, v)), u^i = u^0 v^i.
/// Throws ConstraintUnreachable if Gbar <= 0.
FourState four_from_three(const ThreeVelocity& t, const GTensorField& gfield, int sign);

/// Reduced constraint function Gbar(x, v) = G(x, (1, v)).
double reduced_g(const GTensorField& gfield, const ThreeVelocity& t);

/// Transformation of three-velocities under a chart change,
///   v'^i = (J^i_j v^j + J^i_0) / (J^0_j v^j + J^0_0),
/// with the base point mapped by the transition. Throws ProjectiveInfinity
/// when the denominator is below 1e-12 in magnitude and SingularJacobian if
/// the Jacobian is not invertible.
ThreeVelocity projective_transform(const ChartTransition& t, const ThreeVelocity& s);

/// Closed-form boost of a three-velocity (v^1 along the boost axis).
Eigen::Vector3d boost_three(double alpha, const Eigen::Vector3d& v);

/// Linear boost of a four-velocity, the same map as ChartTransition::lorentz_boost.
Vector boost_four(double alpha, const Vector& u);

/// True iff w = r u for some r != 0, judged by all 2x2 minors of [u; w]
/// being at most tol * |u| |w|. Throws ZeroVector for zero inputs.
bool same_jet(const Vector& u, const Vector& w, double tol = 1e-10);

/// Lifts sampled three-velocity data to a tau-parameterized trajectory on the
/// shell G = 1. Proper time is the trapezoidal integral of
/// sign * Gbar^{1/2N} dq^0 starting at zero. q^0 must be strictly increasing.
Trajectory lift_three_solution(const std::vector<ThreeVelocity>& samples, const GTensorField& gfield,
                               int sign);

/// Four-acceleration of the lifted curve given the three-acceleration
/// w^i = dv^i/dq^0: a^0 = u^0 d(u^0)/dq^0 and a^i = a^0 v^i + (u^0)^2 w^i.
Vector four_acceleration_from_three(const ThreeVelocity& t, const Vector& w, const GTensorField& gfield,
                                    int sign);

}  // namespace relmech
