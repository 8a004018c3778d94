// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "relmech/cli/commands.hpp"
#include "relmech/dynamics.hpp"
#include "relmech/hamiltonian.hpp"
#include "relmech/kinematics.hpp"
#include "relmech/lagrangian.hpp"
#include "relmech/sampling.hpp"
#include "support.hpp"

using namespace relmech;
namespace fs = std::filesystem;

namespace {

constexpr int kSamples = 1000;

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

const Eigen::Vector3d kE(0.2, -0.1, 0.3);
const Eigen::Vector3d kB(0.4, 0.5, -1.0);

PotentialField inverse_r_potential(double q) {
  return PotentialField(
      4, [q](const Vector& x) { return vec({q / x[1], 0, 0, 0}); },
      [q](const Vector& x) {
        Matrix p = Matrix::Zero(4, 4);
        p(1, 0) = -q / (x[1] * x[1]);
        return p;
      });
}

struct NamedModel {
  std::string name;
  LagrangianModel model;
  std::function<Vector(Rng&)> point;
};

std::vector<NamedModel> lagrangian_models() {
  const MetricField mink = MetricField::minkowski(4);
  const MetricField eucl = MetricField::euclidean(4);
  const MetricField schw = MetricField::schwarzschild(1.0);
  const Matrix eta = Vector(vec({1, -1, -1, -1})).asDiagonal();
  auto box = [](Rng& r) { return r.uniform_vector(4, -5, 5); };
  return {
      {"minkowski", LagrangianModel(GTensorField::from_metric(mink), PotentialField::uniform_field(kE, kB)), box},
      {"euclidean", LagrangianModel(GTensorField::from_metric(eucl), PotentialField::uniform_field(kE, kB)), box},
      {"schwarzschild", LagrangianModel(GTensorField::from_metric(schw), inverse_r_potential(0.5)),
       [schw](Rng& r) { return sample_point(schw, r); }},
      {"quartic N=2",
       LagrangianModel(GTensorField::constant(oracle::quartic_tensor(eta, 0.05, 17)),
                       PotentialField::uniform_field(kE, kB)),
       box},
  };
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  fmt::print("[{}] {}. {}: {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail, secs);
  std::fflush(stdout);
}

Outcome noether() {
  std::string detail;
  bool pass = true;
  for (const NamedModel& m : lagrangian_models()) {
    Rng rng(101);
    double worst = 0.0;
    for (int k = 0; k < kSamples; ++k) {
      const Vector x = m.point(rng);
      const Vector u = sample_shell_velocity(m.model.gfield, x, rng) * rng.uniform(0.5, 2.0);
      const Vector a = rng.uniform_vector(4, -1, 1);
      worst = std::max(worst, std::abs(noether_residual(m.model, x, u, a)));
    }
    pass = pass && worst <= 1e-9;
    detail += fmt::format("{}{} {:.2e}", detail.empty() ? "" : ", ", m.name, worst);
  }
  return {pass, detail + " (tol 1e-9)"};
}

Outcome homogeneity() {
  std::string detail;
  bool pass = true;
  for (const NamedModel& m : lagrangian_models()) {
    Rng rng(202);
    double worst = 0.0;
    for (int k = 0; k < kSamples; ++k) {
      const Vector x = m.point(rng);
      const Vector u = sample_shell_velocity(m.model.gfield, x, rng) * rng.uniform(0.5, 2.0);
      const double L = lagrangian_value(m.model, x, u);
      for (double r : {0.5, 2.0, 7.0}) {
        const double Lr = lagrangian_value(m.model, x, r * u);
        worst = std::max(worst, std::abs(Lr - r * L) / std::max(std::abs(r * L), 1e-300));
      }
    }
    pass = pass && worst <= 1e-12;
    detail += fmt::format("{}{} {:.2e}", detail.empty() ? "" : ", ", m.name, worst);
  }
  return {pass, detail + " (tol 1e-12)"};
}

Outcome constraint_conservation() {
  const MetricField mink = MetricField::minkowski(4);
  const GTensorField g = GTensorField::from_metric(mink);
  const FourState s0{Vector::Zero(4), vec({1.25, 0.75, 0, 0})};
  auto run = [&](double B, double dt, int steps) {
    const Connection c = connection_from(mink, PotentialField::uniform_field({0, 0, 0}, {0, 0, B}), 1.0, 1.0);
    return integrate_geodesic(c, g, s0, {dt, steps, Projection::none, steps});
  };
  const Trajectory base = run(1.0, 1e-3, 10000);
  const double drift = base.metadata.max_constraint_drift;
  // at B = 1 the RK4 shell error is below rounding; the order is measured where truncation dominates
  const double coarse = std::abs(run(100.0, 1e-3, 10000).samples.back().G - 1.0);
  const double fine = std::abs(run(100.0, 5e-4, 20000).samples.back().G - 1.0);
  const double ratio = coarse / fine;
  const double base_half = std::abs(run(1.0, 5e-4, 20000).samples.back().G - 1.0);
  return {drift <= 1e-8 && ratio >= 8.0 && ratio <= 32.0,
          fmt::format("B=1 max|G-1| {:.2e} (tol 1e-8), end drift {:.2e} -> {:.2e} on halving; "
                      "B=100 end drift {:.3e} -> {:.3e}, ratio {:.3f} (want [8, 32])",
                      drift, std::abs(base.samples.back().G - 1.0), base_half, coarse, fine, ratio)};
}

Outcome projective_consistency() {
  const GTensorField flat = GTensorField::from_metric(MetricField::minkowski(4));
  Rng rng(404);
  double worst = 0.0;
  double worst_oracle = 0.0;
  double worst_add = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    const Vector u = sample_shell_velocity(flat, Vector::Zero(4), rng) * rng.uniform(0.3, 3.0);
    const double alpha = rng.uniform(-2.0, 2.0);
    const Vector ub = boost_four(alpha, u);
    const Eigen::Vector3d lhs = ub.tail(3) / ub[0];
    const Eigen::Vector3d v = u.tail(3) / u[0];
    const Eigen::Vector3d rhs = boost_three(alpha, v);
    worst = std::max(worst, (lhs - rhs).norm());

    // velocity addition along x with beta = tanh(alpha)
    const double beta = std::tanh(alpha);
    const double den = 1.0 - beta * v[0];
    const Eigen::Vector3d add((v[0] - beta) / den, v[1] * std::sqrt(1 - beta * beta) / den,
                              v[2] * std::sqrt(1 - beta * beta) / den);
    worst_oracle = std::max(worst_oracle, (rhs - add).norm());

    const double a2 = rng.uniform(-1.5, 1.5);
    worst_add = std::max(worst_add, (boost_three(a2, rhs) - boost_three(alpha + a2, v)).norm());
  }
  return {worst <= 1e-12 && worst_oracle <= 1e-12 && worst_add <= 1e-10,
          fmt::format("project(boost4) vs boost3(project) {:.2e}, vs velocity addition {:.2e} (tol 1e-12); "
                      "rapidity additivity {:.2e} (tol 1e-10)",
                      worst, worst_oracle, worst_add)};
}

// Derivative at node k of samples f(t) on a nonuniform grid, second order.
Vector nonuniform_derivative(const std::vector<double>& t, const std::vector<Vector>& f, std::size_t k) {
  const std::size_t n = t.size();
  if (k == 0) {
    const double h1 = t[1] - t[0];
    const double h2 = t[2] - t[1];
    return -(2 * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1] - h1 / (h2 * (h1 + h2)) * f[2];
  }
  if (k == n - 1) {
    const double h1 = t[n - 2] - t[n - 3];
    const double h2 = t[n - 1] - t[n - 2];
    return h2 / (h1 * (h1 + h2)) * f[n - 3] - (h1 + h2) / (h1 * h2) * f[n - 2] +
           (2 * h2 + h1) / (h2 * (h1 + h2)) * f[n - 1];
  }
  const double h1 = t[k] - t[k - 1];
  const double h2 = t[k + 1] - t[k];
  return -h2 / (h1 * (h1 + h2)) * f[k - 1] + (h2 - h1) / (h1 * h2) * f[k] + h1 / (h2 * (h1 + h2)) * f[k + 1];
}

Outcome three_velocity_reduction() {
  const LagrangianModel m(GTensorField::from_metric(MetricField::minkowski(4)),
                          PotentialField::uniform_field({0, 0, 0}, {0, 0, 1}));
  const ThreeVelocity start{0.0, Vector::Zero(3), vec({0.6, 0, 0})};
  const std::vector<ThreeSample> sol = integrate_three_velocity(m, start, 1e-3, 10000, 1);
  std::vector<ThreeVelocity> states;
  states.reserve(sol.size());
  for (const ThreeSample& s : sol) states.push_back(s.state);
  const Trajectory tr = lift_three_solution(states, m.gfield, 1);

  std::vector<double> tau;
  std::vector<Vector> u;
  for (const TrajectorySample& s : tr.samples) {
    tau.push_back(s.tau);
    u.push_back(s.u);
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < tau.size(); ++k) {
    const Vector a = nonuniform_derivative(tau, u, k);
    worst = std::max(worst, euler_lagrange_E(m, tr.samples[k].x, u[k], a).norm());
  }
  return {worst <= 1e-6,
          fmt::format("max |E| over {} lifted nodes {:.2e} (tol 1e-6)", tr.samples.size(), worst)};
}

Outcome geodesic_condition() {
  const MetricField schw = MetricField::schwarzschild(1.0);
  const MetricField mink = MetricField::minkowski(4);
  struct Case {
    std::string name;
    const MetricField* metric;
    Connection c;
  };
  const std::vector<Case> cases = {
      {"levi-civita schwarzschild", &schw, connection_from(schw, PotentialField::zero(4), 1.0, 0.0)},
      {"electromagnetic schwarzschild", &schw, connection_from(schw, inverse_r_potential(0.5), 1.0, 1.0)},
      {"electromagnetic minkowski", &mink, connection_from(mink, PotentialField::uniform_field(kE, kB), 1.0, 1.0)},
  };
  std::string detail;
  bool pass = true;
  for (const Case& cs : cases) {
    const GTensorField g = GTensorField::from_metric(*cs.metric);
    Rng rng(606);
    double worst = 0.0;
    for (int k = 0; k < kSamples; ++k) {
      const Vector x = sample_point(*cs.metric, rng);
      const Vector u = sample_shell_velocity(g, x, rng);
      const GeodesicConditionCheck r = check_geodesic_condition(cs.c, *cs.metric, x, u);
      worst = std::max(worst, std::abs(r.residual) / std::max(r.scale, 1e-300));
    }
    pass = pass && worst <= 1e-9;
    detail += fmt::format("{} {:.2e}, ", cs.name, worst);
  }
  const Connection bad = connection_with_soldering(mink, [](const Vector&, const Vector&) {
    return (1e-3 * Matrix::Identity(4, 4)).eval();
  });
  const Trajectory tr = integrate_geodesic(bad, GTensorField::from_metric(mink),
                                           {Vector::Zero(4), vec({1.25, 0.75, 0, 0})},
                                           {1e-3, 10000, Projection::none, 10000});
  const double drift = tr.metadata.max_constraint_drift;
  pass = pass && drift >= 1e-3;
  return {pass, detail + fmt::format("relative tol 1e-9; corrupted connection drift {:.3e} (want >= 1e-3)", drift)};
}

Outcome hamiltonian_picture() {
  const MetricField schw = MetricField::schwarzschild(1.0);
  const MetricField mink = MetricField::minkowski(4);
  const GTensorField gs = GTensorField::from_metric(schw);
  const GTensorField gm = GTensorField::from_metric(mink);

  // bracket and rhs agreement on random on-shell states
  double worst_bracket = 0.0;
  double worst_rhs = 0.0;
  for (int which = 0; which < 2; ++which) {
    const MetricField& metric = which == 0 ? schw : mink;
    const GTensorField& g = which == 0 ? gs : gm;
    const PotentialField A = which == 0 ? inverse_r_potential(0.5) : PotentialField::uniform_field(kE, kB);
    const HamiltonianModel h = standard_hamiltonian(metric, A, 1.3, 0.7);
    const Connection c = connection_from(metric, A, 1.3, 0.7);
    const PhaseFunction H = h.as_function();
    const PhaseFunction HT = mass_shell_function(h);
    Rng rng(707 + static_cast<std::uint64_t>(which));
    for (int k = 0; k < kSamples; ++k) {
      const Vector x = sample_point(metric, rng);
      const Vector u = sample_shell_velocity(g, x, rng);
      const Vector p = on_shell_momentum(h, x, u);
      worst_bracket = std::max(worst_bracket, std::abs(poisson_bracket(H, HT, {x, p})));
      const Vector geo = geodesic_rhs(c, x, u);
      worst_rhs = std::max(worst_rhs, (second_order_rhs(h, x, u) - geo).norm() / std::max(geo.norm(), 1e-300));
    }
  }

  // trajectories over tau in [0, 10]
  auto compare = [](const MetricField& metric, const PotentialField& A, double charge, const Vector& x0,
                    const Vector& u0) {
    const GTensorField g = GTensorField::from_metric(metric);
    const Connection c = connection_from(metric, A, 1.0, charge);
    const HamiltonianModel h = standard_hamiltonian(metric, A, 1.0, charge);
    const Trajectory geo = integrate_geodesic(c, g, {x0, u0}, {1e-3, 10000, Projection::none, 1});
    const PhaseTrajectory ham = integrate_hamiltonian(h, {x0, on_shell_momentum(h, x0, u0)}, 1e-3, 10000, 1);
    double worst = 0.0;
    for (std::size_t k = 0; k < geo.samples.size(); ++k) {
      worst = std::max(worst, (geo.samples[k].x - ham.samples[k].x).lpNorm<Eigen::Infinity>());
    }
    return geo.samples.size() == ham.samples.size() ? worst : INFINITY;
  };
  const double flat = compare(mink, PotentialField::uniform_field({0, 0, 0}, {0, 0, 1}), 1.0, Vector::Zero(4),
                              vec({1.25, 0.75, 0, 0}));
  const Vector xs = vec({0, 12, std::numbers::pi / 2, 0});
  const double fall =
      compare(schw, PotentialField::zero(4), 0.0, xs, project_to_shell(gs, xs, vec({1, 0, 0, 0})));

  return {worst_bracket <= 1e-12 && worst_rhs <= 1e-8 && flat <= 1e-6 && fall <= 1e-6,
          fmt::format("|{{H, H_T}}| {:.2e} (tol 1e-12), rhs relative difference {:.2e} (tol 1e-8), "
                      "trajectory sup-norm minkowski+B {:.2e}, schwarzschild free fall {:.2e} (tol 1e-6)",
                      worst_bracket, worst_rhs, flat, fall)};
}

Outcome special_relativity_oracle() {
  const MetricField mink = MetricField::minkowski(4);
  const Connection cb = connection_from(mink, PotentialField::uniform_field({0, 0, 0}, {0, 0, 1}), 1.0, 1.0);
  const Trajectory circ = integrate_geodesic(cb, GTensorField::from_metric(mink),
                                             {Vector::Zero(4), vec({1.25, 0.75, 0, 0})},
                                             {1e-3, 10000, Projection::none, 1});
  double speed_dev = 0.0;
  for (const TrajectorySample& s : circ.samples) {
    speed_dev = std::max(speed_dev, std::abs(s.u.tail(3).norm() / s.u[0] - 0.6));
  }

  const double M = 1.0;
  const double r = 10.0 * M;
  const MetricField schw = MetricField::schwarzschild(M);
  const Connection c = connection_from(schw, PotentialField::zero(4), 1.0, 0.0);
  const double omega = oracle::circular_omega(c, schw, r, 0.5 * std::sqrt(M / (r * r * r)), 2.0 * std::sqrt(M / (r * r * r)));
  const Vector x0 = vec({0, r, std::numbers::pi / 2, 0});
  const Trajectory orbit = integrate_geodesic(c, GTensorField::from_metric(schw),
                                              {x0, oracle::circular_velocity(schw, r, omega)},
                                              {1e-2, 20000, Projection::none, 1});
  const double period = oracle::coordinate_period(orbit);
  const double expected = 2.0 * std::numbers::pi * std::sqrt(r * r * r / M);
  const double rel = std::abs(period - expected) / expected;
  return {speed_dev <= 1e-8 && rel <= 1e-4,
          fmt::format("uniform-B speed deviation {:.2e} (tol 1e-8); r = 10M period {:.10g} vs {:.10g}, "
                      "relative {:.2e} (tol 1e-4)",
                      speed_dev, period, expected, rel)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "relmech_acceptance";
  fs::create_directories(dir);
  const fs::path cfg = dir / "scenario.ini";
  const fs::path csv = dir / "trajectory.csv";
  std::ofstream(cfg) << "[scenario]\nkind = geodesic\n[manifold]\nmetric = schwarzschild\nM = 1\n"
                        "[particle]\nx0 = 0,12,1.5707963267948966,0\nu0 = 1,-0.1,0.005,0.02\nnormalize = true\n"
                        "[integrator]\ndt = 0.01\nsteps = 2000\n[output]\nevery = 10\ncsv = "
                     << csv.string() << "\n";

  std::vector<std::string> check_runs;
  std::vector<std::string> sim_runs;
  int codes = 0;
  for (int run = 0; run < 2; ++run) {
    std::ostringstream out;
    std::ostringstream err;
    const fs::path json = dir / fmt::format("check{}.json", run);
    codes |= cli::cmd_check("schwarzschild", 500, 42, json.string(), out, err);
    check_runs.push_back(out.str() + slurp(json));

    std::ostringstream sout;
    std::ostringstream serr;
    codes |= cli::cmd_simulate(cfg.string(), sout, serr);
    sim_runs.push_back(sout.str() + slurp(csv));
  }
  fs::remove_all(dir);
  const bool same_check = check_runs[0] == check_runs[1] && !check_runs[0].empty();
  const bool same_sim = sim_runs[0] == sim_runs[1] && sim_runs[0].size() > 100;
  return {codes == 0 && same_check && same_sim,
          fmt::format("check output identical: {}, simulate output identical: {} ({} bytes), exit codes {}",
                      same_check, same_sim, sim_runs[0].size(), codes == 0 ? "0" : "nonzero")};
}

}  // namespace

int main() {
  report(1, "Noether identity", noether);
  report(2, "Homogeneity", homogeneity);
  report(3, "Constraint conservation", constraint_conservation);
  report(4, "Projective Lorentz consistency", projective_consistency);
  report(5, "Three-velocity reduction", three_velocity_reduction);
  report(6, "Geodesic condition", geodesic_condition);
  report(7, "Hamiltonian picture", hamiltonian_picture);
  report(8, "Special-relativity oracle", special_relativity_oracle);
  report(9, "Determinism", determinism);
  fmt::print("{} of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
