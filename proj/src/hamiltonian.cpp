#include "relmech/hamiltonian.hpp"

#include <cmath>

#include <fmt/format.h>

#include "relmech/detail/rk4.hpp"
#include "relmech/errors.hpp"

namespace relmech {

namespace {

constexpr double kOffShellWarning = 1e-8;

using ScalarFn = PhaseFunction::ScalarFn;
using GradFn = PhaseFunction::GradFn;

GradFn fd_gradient(ScalarFn f, bool wrt_x) {
  return [f = std::move(f), wrt_x](const PhaseState& s) {
    const Vector& base = wrt_x ? s.x : s.p;
    Vector g(base.size());
    for (Eigen::Index l = 0; l < base.size(); ++l) {
      PhaseState sp = s;
      PhaseState sm = s;
      Vector& vp = wrt_x ? sp.x : sp.p;
      Vector& vm = wrt_x ? sm.x : sm.p;
      const double h = fd_step(base[l]);
      vp[l] += h;
      vm[l] -= h;
      g[l] = (f(sp) - f(sm)) / (vp[l] - vm[l]);
    }
    return g;
  };
}

// Central-difference Jacobian of a vector function: J(l, n) = d(v_n)/d(y_l).
Matrix fd_jacobian(const GradFn& v, const PhaseState& s, bool wrt_x) {
  const Vector& base = wrt_x ? s.x : s.p;
  const auto m = base.size();
  Matrix J(m, m);
  for (Eigen::Index l = 0; l < m; ++l) {
    PhaseState sp = s;
    PhaseState sm = s;
    Vector& vp = wrt_x ? sp.x : sp.p;
    Vector& vm = wrt_x ? sm.x : sm.p;
    const double h = fd_step(base[l]);
    vp[l] += h;
    vm[l] -= h;
    J.row(l) = ((v(sp) - v(sm)) / (vp[l] - vm[l])).transpose();
  }
  return J;
}

// Quantities of the standard Hamiltonian at a phase point.
struct StandardData {
  Matrix gi;        // g^{mn}
  Rank3 dgi;        // d_l g^{mn}
  Matrix dA;        // d_l A_m
  Vector pi;        // p - eA
  Vector raised;    // g^{mn} pi_n
};

StandardData standard_data(const HamiltonianModel::Standard& st, const PhaseState& s) {
  StandardData d;
  d.gi = inverse_metric_at(st.metric, s.x);
  const Rank3 dg = st.metric.partials(s.x);
  d.dgi.reserve(dg.size());
  for (const Matrix& dgl : dg) d.dgi.push_back(-d.gi * dgl * d.gi);
  d.pi = s.p;
  if (st.charge != 0.0) {
    d.pi -= st.charge * st.potential.value(s.x);
    d.dA = st.potential.partials(s.x);
  } else {
    d.dA = Matrix::Zero(s.x.size(), s.x.size());
  }
  d.raised = d.gi * d.pi;
  return d;
}

Vector standard_grad_x(const HamiltonianModel::Standard& st, const StandardData& d) {
  const auto m = d.pi.size();
  Vector g(m);
  for (Eigen::Index l = 0; l < m; ++l) {
    g[l] = d.pi.dot(d.dgi[static_cast<std::size_t>(l)] * d.pi) / (2.0 * st.mass);
  }
  g -= (st.charge / st.mass) * (d.dA * d.raised);
  return g;
}

void require_standard(const HamiltonianModel& h, const char* where) {
  if (!h.standard()) throw Unsupported(fmt::format("{}: requires the standard Hamiltonian family", where));
}

}  // namespace

PhaseFunction PhaseFunction::coordinate(int dim, int index) {
  if (index < 0 || index >= dim) throw InvalidArgument("PhaseFunction::coordinate: index out of range");
  return {[index](const PhaseState& s) { return s.x[index]; },
          [dim, index](const PhaseState&) { return Vector::Unit(dim, index).eval(); },
          [dim](const PhaseState&) { return Vector::Zero(dim).eval(); }};
}

PhaseFunction PhaseFunction::momentum(int dim, int index) {
  if (index < 0 || index >= dim) throw InvalidArgument("PhaseFunction::momentum: index out of range");
  return {[index](const PhaseState& s) { return s.p[index]; },
          [dim](const PhaseState&) { return Vector::Zero(dim).eval(); },
          [dim, index](const PhaseState&) { return Vector::Unit(dim, index).eval(); }};
}

HamiltonianModel::HamiltonianModel(MetricField metric, ScalarFn value, GradFn grad_x, GradFn grad_p)
    : metric_(std::move(metric)) {
  if (!value) throw InvalidArgument("HamiltonianModel: value function is required");
  fn_.grad_x = grad_x ? std::move(grad_x) : fd_gradient(value, true);
  fn_.grad_p = grad_p ? std::move(grad_p) : fd_gradient(value, false);
  fn_.value = std::move(value);
}

void HamiltonianModel::check_state(const PhaseState& s) const {
  if (s.x.size() != dim() || s.p.size() != dim()) {
    throw DimensionMismatch(fmt::format("phase state must have dimension {}", dim()));
  }
}

double HamiltonianModel::value(const PhaseState& s) const {
  check_state(s);
  return fn_.value(s);
}

Vector HamiltonianModel::grad_x(const PhaseState& s) const {
  check_state(s);
  return fn_.grad_x(s);
}

Vector HamiltonianModel::grad_p(const PhaseState& s) const {
  check_state(s);
  return fn_.grad_p(s);
}

PhaseHessians HamiltonianModel::hessians(const PhaseState& s) const {
  check_state(s);
  PhaseHessians hs;
  if (standard_) {
    const Standard& st = *standard_;
    const StandardData d = standard_data(st, s);
    const auto m = d.pi.size();
    hs.pp = d.gi / st.mass;
    hs.mixed.resize(m, m);
    for (Eigen::Index l = 0; l < m; ++l) {
      hs.mixed.row(l) =
          ((d.dgi[static_cast<std::size_t>(l)] * d.pi - st.charge * d.gi * d.dA.row(l).transpose()) / st.mass)
              .transpose();
    }
    return hs;
  }
  hs.mixed = fd_jacobian(fn_.grad_p, s, true);
  hs.pp = fd_jacobian(fn_.grad_p, s, false);
  return hs;
}

PhaseFunction HamiltonianModel::as_function() const {
  return {[self = *this](const PhaseState& s) { return self.value(s); },
          [self = *this](const PhaseState& s) { return self.grad_x(s); },
          [self = *this](const PhaseState& s) { return self.grad_p(s); }};
}

HamiltonianModel standard_hamiltonian(const MetricField& metric, const PotentialField& potential, double mass,
                                      double charge) {
  if (metric.dim() != potential.dim()) {
    throw DimensionMismatch("standard_hamiltonian: metric and potential dimensions differ");
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidArgument("standard_hamiltonian: mass must be positive");
  if (!std::isfinite(charge)) throw InvalidArgument("standard_hamiltonian: charge must be finite");
  const HamiltonianModel::Standard st{metric, potential, mass, charge};

  auto value = [st](const PhaseState& s) {
    Vector pi = s.p;
    if (st.charge != 0.0) pi -= st.charge * st.potential.value(s.x);
    return pi.dot(inverse_metric_at(st.metric, s.x) * pi) / (2.0 * st.mass);
  };
  auto grad_x = [st](const PhaseState& s) { return standard_grad_x(st, standard_data(st, s)); };
  auto grad_p = [st](const PhaseState& s) {
    Vector pi = s.p;
    if (st.charge != 0.0) pi -= st.charge * st.potential.value(s.x);
    return (inverse_metric_at(st.metric, s.x) * pi / st.mass).eval();
  };
  HamiltonianModel h(metric, value, grad_x, grad_p);
  h.standard_ = st;
  return h;
}

Vector legendre_velocity(const HamiltonianModel& h, const PhaseState& s) { return h.grad_p(s); }

double mass_shell_residual(const HamiltonianModel& h, const PhaseState& s) {
  const Vector v = h.grad_p(s);
  return v.dot(h.metric().value(s.x) * v) - 1.0;
}

PhaseFunction mass_shell_function(const HamiltonianModel& h) {
  PhaseFunction f;
  f.value = [h](const PhaseState& s) { return mass_shell_residual(h, s); };
  f.grad_x = [h](const PhaseState& s) {
    const Vector v = h.grad_p(s);
    const Matrix g = h.metric().value(s.x);
    const Rank3 dg = h.metric().partials(s.x);
    const PhaseHessians hs = h.hessians(s);
    const Vector gv = g * v;
    Vector out = 2.0 * hs.mixed * gv;
    for (Eigen::Index l = 0; l < v.size(); ++l) out[l] += v.dot(dg[static_cast<std::size_t>(l)] * v);
    return out;
  };
  f.grad_p = [h](const PhaseState& s) {
    const Vector v = h.grad_p(s);
    const PhaseHessians hs = h.hessians(s);
    return (2.0 * hs.pp * (h.metric().value(s.x) * v)).eval();
  };
  return f;
}

PhaseVelocity hamiltonian_vector_field(const HamiltonianModel& h, const PhaseState& s) {
  return {h.grad_p(s), -h.grad_x(s)};
}

double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g, const PhaseState& s) {
  return f.grad_x(s).dot(g.grad_p(s)) - f.grad_p(s).dot(g.grad_x(s));
}

Vector on_shell_momentum(const HamiltonianModel& h, const Vector& x, const Vector& u) {
  require_standard(h, "on_shell_momentum");
  if (x.size() != h.dim() || u.size() != h.dim()) {
    throw DimensionMismatch("on_shell_momentum: point and velocity must match the model dimension");
  }
  const auto& st = *h.standard();
  Vector p = st.mass * (st.metric.value(x) * u);
  if (st.charge != 0.0) p += st.charge * st.potential.value(x);
  return p;
}

Vector second_order_rhs(const HamiltonianModel& h, const PhaseState& s) {
  const Vector hx = h.grad_x(s);
  const Vector hp = h.grad_p(s);
  const PhaseHessians hs = h.hessians(s);
  return hs.mixed.transpose() * hp - hs.pp * hx;
}

Vector second_order_rhs(const HamiltonianModel& h, const Vector& x, const Vector& u) {
  require_standard(h, "second_order_rhs");
  return second_order_rhs(h, PhaseState{x, on_shell_momentum(h, x, u)});
}

PhaseTrajectory integrate_hamiltonian(const HamiltonianModel& h, const PhaseState& s0, double dt, int steps,
                                      int record_every) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("integrate_hamiltonian: dt must be positive");
  if (steps < 1) throw InvalidArgument("integrate_hamiltonian: steps must be at least 1");
  if (record_every < 1) throw InvalidArgument("integrate_hamiltonian: record_every must be at least 1");
  const int m = h.dim();
  if (s0.x.size() != m || s0.p.size() != m) throw DimensionMismatch("integrate_hamiltonian: bad initial state");

  PhaseTrajectory out;
  out.metadata.integrator = "rk4";
  out.metadata.step = dt;

  const double ht0 = mass_shell_residual(h, s0);
  if (std::abs(ht0) > kOffShellWarning) {
    out.metadata.warnings.push_back(fmt::format("initial state is off shell: |H_T| = {:.3e}", std::abs(ht0)));
  }

  auto split = [m](const Vector& y) { return PhaseState{y.head(m), y.tail(m)}; };
  auto rhs = [&](const Vector& y) {
    const PhaseVelocity v = hamiltonian_vector_field(h, split(y));
    Vector dy(2 * m);
    dy.head(m) = v.x_dot;
    dy.tail(m) = v.p_dot;
    return dy;
  };

  Vector y(2 * m);
  y.head(m) = s0.x;
  y.tail(m) = s0.p;
  out.samples.push_back({0.0, s0.x, s0.p, h.value(s0), ht0});
  double drift = std::abs(ht0);
  double tau = 0.0;

  for (int step = 1; step <= steps; ++step) {
    Vector next;
    double H = 0.0;
    double HT = 0.0;
    try {
      next = detail::rk4_step(y, dt, rhs);
      if (!detail::all_finite(next)) {
        throw StepRejected(fmt::format("integrate_hamiltonian: non-finite state at step {}", step));
      }
      const PhaseState s = split(next);
      H = h.value(s);
      HT = mass_shell_residual(h, s);
    } catch (Error& e) {
      e.last_good_tau = tau;
      throw;
    }
    y = std::move(next);
    tau = step * dt;
    drift = std::max(drift, std::abs(HT));
    if (step % record_every == 0 || step == steps) out.samples.push_back({tau, y.head(m), y.tail(m), H, HT});
  }
  out.metadata.max_constraint_drift = drift;
  return out;
}

}  // namespace relmech
