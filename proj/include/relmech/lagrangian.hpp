#pragma once

#include <vector>

#include "relmech/geometry.hpp"
#include "relmech/kinematics.hpp"

namespace relmech {

/// L = mass * G^{1/2N} + charge * u^m A_m on the four-velocity space.
/// mass = charge = 1 is the parameter-free generic form.
struct LagrangianModel {
  LagrangianModel(GTensorField gfield, PotentialField potential, double mass = 1.0, double charge = 1.0);

  GTensorField gfield;
  PotentialField potential;
  double mass;
  double charge;

  int dim() const { return gfield.dim(); }
};

/// Variational derivatives at a jet (x, u, a).
struct ELResidual {
  Vector E;      ///< E_b, the relativistic-equation components
  Vector cal_E;  ///< Lagrange operator components E_b P^b_l G^{1/2N-1}
  double G = 0.0;
  /// u^l cal_E_l / (|u| |cal_E| + 1e-30); zero up to rounding for any input.
  double noether = 0.0;
};

double lagrangian_value(const LagrangianModel& model, const Vector& x, const Vector& u);

/// E_b = mass [ (d_b G_{m a2..}/2N - d_m G_{b a2..}) u^m u^a2.. - (2N-1) G_{b m a3..} a^m u^a3.. ]
///       + charge G^{1-1/2N} F_{bm} u^m.
/// Throws NonPositiveG if G(x, u) <= 0.
Vector euler_lagrange_E(const LagrangianModel& model, const Vector& x, const Vector& u, const Vector& a);

ELResidual variational_derivative(const LagrangianModel& model, const Vector& x, const Vector& u,
                                  const Vector& a);

double noether_residual(const LagrangianModel& model, const Vector& x, const Vector& u, const Vector& a);

/// G(x, u); the relativistic constraint surface is G = 1.
double constraint_value(const LagrangianModel& model, const Vector& x, const Vector& u);

/// P(b, l) = delta^b_l - u^b G_{l n2..} u^n2.. / G. Annihilates u and is idempotent.
Matrix constraint_projector(const LagrangianModel& model, const Vector& x, const Vector& u);

/// Acceleration solving E_b = 0 for a. Throws DegenerateLagrangian if the
/// rank-2 contraction G_{bm..} u.. is singular.
Vector relativistic_acceleration(const LagrangianModel& model, const Vector& x, const Vector& u);

/// Chart-local Lagrangian mass * Gbar^{1/2N} + charge (v^i A_i + A_0).
double three_lagrangian_value(const LagrangianModel& model, const ThreeVelocity& t);

/// Reduced Lagrange operator for the three-acceleration w = dv/dq^0. The
/// omitted time component is -v^i times the returned components.
Vector three_euler_lagrange(const LagrangianModel& model, const ThreeVelocity& t, const Vector& w);

/// Three-acceleration solving the reduced equation at t.
Vector three_acceleration(const LagrangianModel& model, const ThreeVelocity& t);

struct ThreeSample {
  ThreeVelocity state;
  Vector w;
};

/// RK4 integration of the reduced equation with q^0 as the evolution
/// parameter. Records the initial state, every `record_every`-th step and
/// the final step.
std::vector<ThreeSample> integrate_three_velocity(const LagrangianModel& model, const ThreeVelocity& start,
                                                  double dq0, int steps, int record_every = 1);

}  // namespace relmech
