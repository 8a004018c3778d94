#include "relmech/kinematics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "relmech/errors.hpp"

namespace relmech {

namespace {

constexpr double kProjectiveFloor = 1e-12;

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument(fmt::format("sign must be +1 or -1, got {}", sign));
}

Vector jet_direction(const ThreeVelocity& t) {
  Vector dir(t.dim());
  dir[0] = 1.0;
  dir.tail(t.v.size()) = t.v;
  return dir;
}

void check_three(const ThreeVelocity& t) {
  if (t.v.size() != t.q.size()) {
    throw DimensionMismatch(
        fmt::format("three-velocity has {} coordinates but {} velocity components", t.q.size(), t.v.size()));
  }
}

}  // namespace

Vector ThreeVelocity::point() const {
  Vector x(dim());
  x[0] = q0;
  x.tail(q.size()) = q;
  return x;
}

ChartTransition ChartTransition::identity(int dim) {
  return {[](const Vector& x) { return x; }, [dim](const Vector&) { return Matrix::Identity(dim, dim).eval(); }};
}

ChartTransition ChartTransition::lorentz_boost(double alpha, int dim) {
  if (dim < 2) throw InvalidArgument("lorentz_boost: dimension must be at least 2");
  Matrix lambda = Matrix::Identity(dim, dim);
  lambda(0, 0) = std::cosh(alpha);
  lambda(0, 1) = -std::sinh(alpha);
  lambda(1, 0) = -std::sinh(alpha);
  lambda(1, 1) = std::cosh(alpha);
  return {[lambda](const Vector& x) { return (lambda * x).eval(); }, [lambda](const Vector&) { return lambda; }};
}

ThreeVelocity three_from_four(const FourState& s) {
  if (s.x.size() != s.u.size()) throw DimensionMismatch("three_from_four: point and velocity dimensions differ");
  if (s.x.size() < 2) throw DimensionMismatch("three_from_four: dimension must be at least 2");
  const double u0 = s.u[0];
  if (!(std::abs(u0) >= 1e-300)) {
    throw ZeroTimeVelocity("three_from_four: time component of the four-velocity vanishes");
  }
  const Eigen::Index n = s.x.size() - 1;
  return ThreeVelocity{s.x[0], s.x.tail(n), s.u.tail(n) / u0};
}

double reduced_g(const GTensorField& gfield, const ThreeVelocity& t) {
  check_three(t);
  return g_value(gfield, t.point(), jet_direction(t));
}

FourState four_from_three(const ThreeVelocity& t, const GTensorField& gfield, int sign) {
  check_sign(sign);
  const double gbar = reduced_g(gfield, t);
  if (!(gbar > 0.0)) {
    throw ConstraintUnreachable(
        fmt::format("four_from_three: reduced constraint G(x, (1, v)) = {} is not positive", gbar));
  }
  const double u0 = sign * std::pow(gbar, -1.0 / (2.0 * gfield.order_half()));
  return FourState{t.point(), u0 * jet_direction(t)};
}

ThreeVelocity projective_transform(const ChartTransition& t, const ThreeVelocity& s) {
  check_three(s);
  const Vector x = s.point();
  const Matrix jac = t.jacobian(x);
  const Eigen::Index m = x.size();
  if (jac.rows() != m || jac.cols() != m) throw DimensionMismatch("projective_transform: Jacobian shape mismatch");
  Eigen::FullPivLU<Matrix> lu(jac);
  if (!lu.isInvertible()) throw SingularJacobian("projective_transform: chart Jacobian is not invertible");

  const Eigen::Index n = m - 1;
  const double denom = jac.row(0).tail(n).dot(s.v) + jac(0, 0);
  if (!(std::abs(denom) >= kProjectiveFloor)) {
    throw ProjectiveInfinity("projective_transform: image leaves the affine chart of the projective fibre");
  }
  const Vector numer = jac.bottomRightCorner(n, n) * s.v + jac.col(0).tail(n);
  const Vector xp = t.map(x);
  if (xp.size() != m) throw DimensionMismatch("projective_transform: transition map changed the dimension");
  return ThreeVelocity{xp[0], xp.tail(n), numer / denom};
}

Eigen::Vector3d boost_three(double alpha, const Eigen::Vector3d& v) {
  const double ch = std::cosh(alpha);
  const double sh = std::sinh(alpha);
  const double denom = -v[0] * sh + ch;
  if (!(std::abs(denom) >= kProjectiveFloor)) {
    throw ProjectiveInfinity("boost_three: boosted velocity is at projective infinity");
  }
  return {(v[0] * ch - sh) / denom, v[1] / denom, v[2] / denom};
}

Vector boost_four(double alpha, const Vector& u) {
  if (u.size() < 2) throw DimensionMismatch("boost_four: dimension must be at least 2");
  const double ch = std::cosh(alpha);
  const double sh = std::sinh(alpha);
  Vector out = u;
  out[0] = u[0] * ch - u[1] * sh;
  out[1] = -u[0] * sh + u[1] * ch;
  return out;
}

bool same_jet(const Vector& u, const Vector& w, double tol) {
  if (u.size() != w.size()) throw DimensionMismatch("same_jet: vectors have different dimensions");
  const double nu = u.norm();
  const double nw = w.norm();
  if (nu == 0.0 || nw == 0.0) throw ZeroVector("same_jet: jets are defined only for non-zero vectors");
  const double bound = tol * nu * nw;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    for (Eigen::Index j = i + 1; j < u.size(); ++j) {
      if (std::abs(u[i] * w[j] - u[j] * w[i]) > bound) return false;
    }
  }
  return true;
}

Trajectory lift_three_solution(const std::vector<ThreeVelocity>& samples, const GTensorField& gfield, int sign) {
  check_sign(sign);
  Trajectory out;
  out.metadata.integrator = "trapezoid-lift";
  out.metadata.projection = Projection::none;
  if (samples.empty()) return out;

  const double inv2n = 1.0 / (2.0 * gfield.order_half());
  double tau = 0.0;
  double prev_rate = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const ThreeVelocity& t = samples[k];
    if (k > 0 && !(t.q0 > samples[k - 1].q0)) {
      throw NonMonotoneTime(
          fmt::format("lift_three_solution: q0 must be strictly increasing (sample {} has q0 = {} after {})", k,
                      t.q0, samples[k - 1].q0));
    }
    const FourState s = four_from_three(t, gfield, sign);
    // dtau/dq0 = 1/u^0 = sign * Gbar^{1/2N}
    const double rate = sign * std::pow(reduced_g(gfield, t), inv2n);
    if (k > 0) {
      tau += 0.5 * (rate + prev_rate) * (t.q0 - samples[k - 1].q0);
      out.metadata.step = std::max(out.metadata.step, t.q0 - samples[k - 1].q0);
    }
    prev_rate = rate;
    const double G = g_value(gfield, s.x, s.u);
    out.metadata.max_constraint_drift = std::max(out.metadata.max_constraint_drift, std::abs(G - 1.0));
    out.samples.push_back(TrajectorySample{tau, s.x, s.u, G});
  }
  return out;
}

Vector four_acceleration_from_three(const ThreeVelocity& t, const Vector& w, const GTensorField& gfield,
                                    int sign) {
  check_sign(sign);
  check_three(t);
  if (w.size() != t.v.size()) throw DimensionMismatch("four_acceleration_from_three: w has the wrong dimension");
  const Vector x = t.point();
  const Vector dir = jet_direction(t);
  const int two_n = 2 * gfield.order_half();
  const DenseTensor G = gfield.value(x);
  const std::vector<DenseTensor> dG = gfield.partials(x);

  const double gbar = G.full(dir);
  if (!(gbar > 0.0)) throw ConstraintUnreachable("four_acceleration_from_three: reduced constraint not positive");
  const Vector c = G.contract_vector(dir);
  double dgbar = two_n * c.tail(w.size()).dot(w);
  for (Eigen::Index l = 0; l < x.size(); ++l) dgbar += dir[l] * dG[static_cast<std::size_t>(l)].full(dir);

  const double u0 = sign * std::pow(gbar, -1.0 / two_n);
  const double du0_dq0 = sign * (-1.0 / two_n) * std::pow(gbar, -1.0 / two_n - 1.0) * dgbar;
  const double a0 = u0 * du0_dq0;
  Vector a(x.size());
  a[0] = a0;
  a.tail(w.size()) = a0 * t.v + u0 * u0 * w;
  return a;
}

}  // namespace relmech
