#pragma once

#include <functional>
#include <optional>

#include "relmech/geometry.hpp"
#include "relmech/trajectory.hpp"

namespace relmech {

/// Point of T*X: coordinates x^l and momenta p_l.
struct PhaseState {
  Vector x;
  Vector p;
};

/// Scalar on phase space with its gradients: grad_x = d_l f, grad_p = d^l f
/// (derivative with respect to p_l).
struct PhaseFunction {
  using ScalarFn = std::function<double(const PhaseState&)>;
  using GradFn = std::function<Vector(const PhaseState&)>;

  ScalarFn value;
  GradFn grad_x;
  GradFn grad_p;

  /// x^index or p_index as a phase function.
  static PhaseFunction coordinate(int dim, int index);
  static PhaseFunction momentum(int dim, int index);
};

/// Second derivatives of H: mixed(l, n) = d_l d^n H, pp(l, n) = d^l d^n H.
struct PhaseHessians {
  Matrix mixed;
  Matrix pp;
};

class HamiltonianModel {
 public:
  struct Standard {
    MetricField metric;
    PotentialField potential;
    double mass = 1.0;
    double charge = 1.0;
  };

  /// Custom Hamiltonian. `metric` defines the mass shell; missing gradients
  /// fall back to central differences of `value`.
  HamiltonianModel(MetricField metric, PhaseFunction::ScalarFn value, PhaseFunction::GradFn grad_x = {},
                   PhaseFunction::GradFn grad_p = {});

  int dim() const { return metric_.dim(); }
  const MetricField& metric() const { return metric_; }
  const std::optional<Standard>& standard() const { return standard_; }

  double value(const PhaseState& s) const;
  Vector grad_x(const PhaseState& s) const;
  Vector grad_p(const PhaseState& s) const;
  /// Analytic for the standard family, central differences of the gradients otherwise.
  PhaseHessians hessians(const PhaseState& s) const;

  PhaseFunction as_function() const;

 private:
  friend HamiltonianModel standard_hamiltonian(const MetricField&, const PotentialField&, double, double);

  void check_state(const PhaseState& s) const;

  MetricField metric_;
  PhaseFunction fn_;
  std::optional<Standard> standard_;
};

/// H = g^{mn} (p - eA)_m (p - eA)_n / (2 mass).
HamiltonianModel standard_hamiltonian(const MetricField& metric, const PotentialField& potential, double mass,
                                      double charge);

/// u^l = d^l H.
Vector legendre_velocity(const HamiltonianModel& h, const PhaseState& s);

/// H_T = g_{mn} d^m H d^n H - 1.
double mass_shell_residual(const HamiltonianModel& h, const PhaseState& s);

/// H_T as a phase function, gradients taken from its definition.
PhaseFunction mass_shell_function(const HamiltonianModel& h);

struct PhaseVelocity {
  Vector x_dot;
  Vector p_dot;
};

/// (x', p') = (d^l H, -d_l H).
PhaseVelocity hamiltonian_vector_field(const HamiltonianModel& h, const PhaseState& s);

/// {f, g} = d_l f d^l g - d^l f d_l g, so that {x^l, p_m} = delta^l_m.
double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g, const PhaseState& s);

/// p = mass g u + charge A. Standard family only.
Vector on_shell_momentum(const HamiltonianModel& h, const Vector& x, const Vector& u);

/// x''^l = d^m H d_m d^l H - d_m H d^m d^l H evaluated at p(x, u) from
/// on_shell_momentum. Standard family only.
Vector second_order_rhs(const HamiltonianModel& h, const Vector& x, const Vector& u);

/// The same expression at an arbitrary phase point.
Vector second_order_rhs(const HamiltonianModel& h, const PhaseState& s);

/// RK4 on the Hamiltonian vector field. Records the initial state, every
/// `record_every`-th step and the final step; metadata.max_constraint_drift
/// is max |H_T| over every step.
PhaseTrajectory integrate_hamiltonian(const HamiltonianModel& h, const PhaseState& s0, double dt, int steps,
                                      int record_every = 1);

}  // namespace relmech
