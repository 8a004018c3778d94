#include "relmech/lagrangian.hpp"

#include <cmath>

#include <fmt/format.h>

#include "relmech/detail/rk4.hpp"
#include "relmech/errors.hpp"

namespace relmech {

namespace {

void check_jet(const LagrangianModel& model, const Vector& x, const Vector& u) {
  if (x.size() != model.dim() || u.size() != model.dim()) {
    throw DimensionMismatch(fmt::format("expected point and velocity of dimension {}", model.dim()));
  }
}

double positive_g(double G, const char* where) {
  if (!(G > 0.0)) throw NonPositiveG(fmt::format("{}: G = {} is not positive", where, G));
  return G;
}

// Field data at x contracted against u.
struct JetData {
  int two_n = 2;
  double G = 0.0;
  Vector G1;             // G_{b a2..} u..
  Matrix G2;             // G_{b m a3..} u..
  std::vector<Vector> dG1;  // dG1[l] = d_l G_{b a2..} u..
  Vector dG0;            // dG0[l] = d_l G(u)
};

JetData contract_fields(const GTensorField& gfield, const Vector& x, const Vector& u) {
  JetData d;
  d.two_n = 2 * gfield.order_half();
  const DenseTensor G = gfield.value(x);
  const std::vector<DenseTensor> dG = gfield.partials(x);
  d.G2 = G.contract_matrix(u);
  d.G1 = d.G2 * u;
  d.G = d.G1.dot(u);
  const auto m = u.size();
  d.dG1.reserve(static_cast<std::size_t>(m));
  d.dG0.resize(m);
  for (Eigen::Index l = 0; l < m; ++l) {
    d.dG1.push_back(dG[static_cast<std::size_t>(l)].contract_vector(u));
    d.dG0[l] = d.dG1.back().dot(u);
  }
  return d;
}

// Part of E_b that does not depend on the acceleration.
Vector e_without_acceleration(const LagrangianModel& model, const JetData& d, const Vector& x, const Vector& u) {
  const auto m = u.size();
  Vector geo = d.dG0 / d.two_n;
  for (Eigen::Index mu = 0; mu < m; ++mu) geo -= u[mu] * d.dG1[static_cast<std::size_t>(mu)];
  Vector e = model.mass * geo;
  if (model.charge != 0.0) {
    const Matrix F = faraday_at(model.potential, x);
    e += model.charge * std::pow(d.G, 1.0 - 1.0 / d.two_n) * (F * u);
  }
  return e;
}

// Reduced operator written as b + M w.
struct ReducedOperator {
  Vector b;
  Matrix M;
};

ReducedOperator reduced_operator(const LagrangianModel& model, const ThreeVelocity& t) {
  const Eigen::Index n = t.v.size();
  if (t.q.size() != n || n + 1 != model.dim()) {
    throw DimensionMismatch(fmt::format("three-velocity does not match model dimension {}", model.dim()));
  }
  const Vector x = t.point();
  Vector dir(n + 1);
  dir[0] = 1.0;
  dir.tail(n) = t.v;

  const JetData d = contract_fields(model.gfield, x, dir);
  const double k = d.two_n;
  const double gbar = positive_g(d.G, "three_euler_lagrange");
  const double pw1 = std::pow(gbar, 1.0 / k - 1.0);
  const double pw2 = std::pow(gbar, 1.0 / k - 2.0);

  // d_0 C_i = sum_l U^l d_l G_{i..} U.. + (k-1) G2_{ij} w^j
  Vector dc0 = Vector::Zero(n);
  for (Eigen::Index l = 0; l <= n; ++l) dc0 += dir[l] * d.dG1[static_cast<std::size_t>(l)].tail(n);
  // d_0 Gbar = U^l d_l Gbar + k C_j w^j
  const double dg0 = dir.dot(d.dG0);
  const Vector c = d.G1.tail(n);

  // d_0 p_i with p_i = C_i Gbar^{1/k-1}
  const Vector dp0 = pw1 * dc0 + (1.0 / k - 1.0) * pw2 * dg0 * c;
  const Matrix dpw = pw1 * (k - 1.0) * d.G2.bottomRightCorner(n, n) + (1.0 / k - 1.0) * pw2 * k * c * c.transpose();

  ReducedOperator op;
  op.b = model.mass * (d.dG0.tail(n) * pw1 / k - dp0);
  op.M = -model.mass * dpw;
  if (model.charge != 0.0) {
    const Matrix F = faraday_at(model.potential, x);
    op.b += model.charge * (F.bottomRightCorner(n, n) * t.v + F.col(0).tail(n));
  }
  return op;
}

}  // namespace

LagrangianModel::LagrangianModel(GTensorField gfield_in, PotentialField potential_in, double mass_in,
                                 double charge_in)
    : gfield(std::move(gfield_in)), potential(std::move(potential_in)), mass(mass_in), charge(charge_in) {
  if (gfield.dim() != potential.dim()) {
    throw DimensionMismatch(
        fmt::format("LagrangianModel: G field has dimension {} but potential has {}", gfield.dim(), potential.dim()));
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidArgument("LagrangianModel: mass must be positive");
  if (!std::isfinite(charge)) throw InvalidArgument("LagrangianModel: charge must be finite");
}

double lagrangian_value(const LagrangianModel& model, const Vector& x, const Vector& u) {
  check_jet(model, x, u);
  const double G = positive_g(g_value(model.gfield, x, u), "lagrangian_value");
  double L = model.mass * std::pow(G, 1.0 / (2.0 * model.gfield.order_half()));
  if (model.charge != 0.0) L += model.charge * u.dot(model.potential.value(x));
  return L;
}

Vector euler_lagrange_E(const LagrangianModel& model, const Vector& x, const Vector& u, const Vector& a) {
  check_jet(model, x, u);
  if (a.size() != model.dim()) throw DimensionMismatch("euler_lagrange_E: acceleration has the wrong dimension");
  const JetData d = contract_fields(model.gfield, x, u);
  positive_g(d.G, "euler_lagrange_E");
  return e_without_acceleration(model, d, x, u) - model.mass * (d.two_n - 1) * (d.G2 * a);
}

ELResidual variational_derivative(const LagrangianModel& model, const Vector& x, const Vector& u,
                                  const Vector& a) {
  check_jet(model, x, u);
  if (a.size() != model.dim()) {
    throw DimensionMismatch("variational_derivative: acceleration has the wrong dimension");
  }
  const JetData d = contract_fields(model.gfield, x, u);
  positive_g(d.G, "variational_derivative");
  ELResidual r;
  r.G = d.G;
  r.E = e_without_acceleration(model, d, x, u) - model.mass * (d.two_n - 1) * (d.G2 * a);
  // E_b [delta^b_l - u^b G_l / G] G^{1/2N - 1}
  r.cal_E = (r.E - (r.E.dot(u) / d.G) * d.G1) * std::pow(d.G, 1.0 / d.two_n - 1.0);
  r.noether = u.dot(r.cal_E) / (u.norm() * r.cal_E.norm() + 1e-30);
  return r;
}

double noether_residual(const LagrangianModel& model, const Vector& x, const Vector& u, const Vector& a) {
  return variational_derivative(model, x, u, a).noether;
}

double constraint_value(const LagrangianModel& model, const Vector& x, const Vector& u) {
  check_jet(model, x, u);
  return g_value(model.gfield, x, u);
}

Matrix constraint_projector(const LagrangianModel& model, const Vector& x, const Vector& u) {
  check_jet(model, x, u);
  const Vector G1 = model.gfield.value(x).contract_vector(u);
  const double G = positive_g(G1.dot(u), "constraint_projector");
  return Matrix::Identity(u.size(), u.size()) - (u * G1.transpose()) / G;
}

Vector relativistic_acceleration(const LagrangianModel& model, const Vector& x, const Vector& u) {
  check_jet(model, x, u);
  const JetData d = contract_fields(model.gfield, x, u);
  positive_g(d.G, "relativistic_acceleration");
  const Vector rhs = e_without_acceleration(model, d, x, u) / (model.mass * (d.two_n - 1));
  Matrix inv;
  try {
    inv = invert_metric(d.G2);
  } catch (const SingularMetric&) {
    throw DegenerateLagrangian("relativistic_acceleration: contracted G tensor is singular");
  }
  return inv * rhs;
}

double three_lagrangian_value(const LagrangianModel& model, const ThreeVelocity& t) {
  const double gbar = positive_g(reduced_g(model.gfield, t), "three_lagrangian_value");
  double L = model.mass * std::pow(gbar, 1.0 / (2.0 * model.gfield.order_half()));
  if (model.charge != 0.0) {
    const Vector A = model.potential.value(t.point());
    L += model.charge * (t.v.dot(A.tail(t.v.size())) + A[0]);
  }
  return L;
}

Vector three_euler_lagrange(const LagrangianModel& model, const ThreeVelocity& t, const Vector& w) {
  if (w.size() != t.v.size()) throw DimensionMismatch("three_euler_lagrange: w has the wrong dimension");
  const ReducedOperator op = reduced_operator(model, t);
  return op.b + op.M * w;
}

Vector three_acceleration(const LagrangianModel& model, const ThreeVelocity& t) {
  const ReducedOperator op = reduced_operator(model, t);
  Eigen::FullPivLU<Matrix> lu(op.M);
  if (!lu.isInvertible()) throw DegenerateLagrangian("three_acceleration: reduced Lagrangian is degenerate");
  return lu.solve(-op.b);
}

std::vector<ThreeSample> integrate_three_velocity(const LagrangianModel& model, const ThreeVelocity& start,
                                                  double dq0, int steps, int record_every) {
  if (!(dq0 > 0.0)) throw InvalidArgument("integrate_three_velocity: dq0 must be positive");
  if (steps < 1) throw InvalidArgument("integrate_three_velocity: steps must be at least 1");
  if (record_every < 1) throw InvalidArgument("integrate_three_velocity: record_every must be at least 1");
  const Eigen::Index n = start.v.size();
  if (start.q.size() != n || n + 1 != model.dim()) {
    throw DimensionMismatch("integrate_three_velocity: start state does not match the model");
  }

  // y = (q0, q, v); q0 is carried as a state component with unit rate.
  auto unpack = [n](const Vector& y) { return ThreeVelocity{y[0], y.segment(1, n), y.tail(n)}; };
  auto rhs = [&](const Vector& y) {
    const ThreeVelocity t = unpack(y);
    Vector dy(y.size());
    dy[0] = 1.0;
    dy.segment(1, n) = t.v;
    dy.tail(n) = three_acceleration(model, t);
    return dy;
  };

  Vector y(1 + 2 * n);
  y[0] = start.q0;
  y.segment(1, n) = start.q;
  y.tail(n) = start.v;

  std::vector<ThreeSample> out;
  out.push_back({start, three_acceleration(model, start)});
  for (int step = 1; step <= steps; ++step) {
    Vector next;
    try {
      next = detail::rk4_step(y, dq0, rhs);
    } catch (Error& e) {
      e.last_good_tau = y[0];
      throw;
    }
    if (!detail::all_finite(next)) {
      StepRejected err(fmt::format("integrate_three_velocity: non-finite state at step {}", step));
      err.last_good_tau = y[0];
      throw err;
    }
    // Exact parameter grid avoids drift from repeated addition.
    next[0] = start.q0 + step * dq0;
    y = std::move(next);
    if (step % record_every == 0 || step == steps) {
      const ThreeVelocity t = unpack(y);
      out.push_back({t, three_acceleration(model, t)});
    }
  }
  return out;
}

}  // namespace relmech
