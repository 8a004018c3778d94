#include "relmech/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "relmech/cli/config.hpp"
#include "relmech/dynamics.hpp"
#include "relmech/hamiltonian.hpp"
#include "relmech/lagrangian.hpp"
#include "relmech/sampling.hpp"

namespace relmech::cli {

using json = nlohmann::ordered_json;

namespace {

// Field content of the check suite for each catalog metric.
struct CheckModel {
  MetricField metric;
  PotentialField potential;
};

CheckModel check_model(MetricKind kind) {
  const Eigen::Vector3d E(0.2, -0.1, 0.3);
  const Eigen::Vector3d B(0.4, 0.5, -1.0);
  switch (kind) {
    case MetricKind::minkowski:
      return {MetricField::minkowski(4), PotentialField::uniform_field(E, B)};
    case MetricKind::euclidean:
      return {MetricField::euclidean(4), PotentialField::uniform_field(E, B)};
    case MetricKind::diagonal:
      return {MetricField::diagonal({2.0, -1.0, -0.5, -3.0}), PotentialField::uniform_field(E, B)};
    case MetricKind::schwarzschild: {
      // A_t = q / r
      const double q = 0.5;
      PotentialField potential(
          4,
          [q](const Vector& x) {
            Vector a = Vector::Zero(4);
            a[0] = q / x[1];
            return a;
          },
          [q](const Vector& x) {
            Matrix p = Matrix::Zero(4, 4);
            p(1, 0) = -q / (x[1] * x[1]);
            return p;
          });
      return {MetricField::schwarzschild(1.0), std::move(potential)};
    }
    case MetricKind::custom:
      break;
  }
  throw InvalidArgument("check suite: unsupported metric");
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : num; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("output", fmt::format("cannot write '{}'", path));
  f << text;
}

template <typename Writer>
void write_csv(const std::string& path, const Writer& writer) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("output.csv", fmt::format("cannot write '{}'", path));
  writer(f);
}

std::string runtime_message(const Error& e) {
  return fmt::format("integration failed after tau = {:.17g}: {}", e.last_good_tau, e.what());
}

json metadata_json(const TrajectoryMetadata& m) {
  json j;
  j["integrator"] = m.integrator;
  j["step"] = m.step;
  j["projection"] = std::string(projection_name(m.projection));
  j["max_constraint_drift"] = m.max_constraint_drift;
  j["warnings"] = m.warnings;
  return j;
}

Trajectory run_geodesic(const Scenario& s, int record_every) {
  const ScenarioConfig& c = s.config;
  const Connection conn = connection_from(s.metric, s.potential, c.mass, c.charge);
  return integrate_geodesic(conn, s.gfield, s.start, {c.dt, c.steps, c.projection, record_every});
}

PhaseTrajectory run_hamiltonian(const Scenario& s, double charge, int record_every) {
  const ScenarioConfig& c = s.config;
  const HamiltonianModel h = standard_hamiltonian(s.metric, s.potential, c.mass, charge);
  const PhaseState p0{s.start.x, on_shell_momentum(h, s.start.x, s.start.u)};
  return integrate_hamiltonian(h, p0, c.dt, c.steps, record_every);
}

Trajectory run_three_velocity(const Scenario& s) {
  const ScenarioConfig& c = s.config;
  const LagrangianModel model(s.gfield, s.potential, c.mass, c.charge);
  const ThreeVelocity t0 = three_from_four(s.start);
  const int sign = s.start.u[0] > 0.0 ? 1 : -1;
  const auto samples = integrate_three_velocity(model, t0, c.dt, c.steps, c.every);
  std::vector<ThreeVelocity> states;
  states.reserve(samples.size());
  for (const auto& sm : samples) states.push_back(sm.state);
  Trajectory tr = lift_three_solution(states, s.gfield, sign);
  tr.metadata.integrator = "rk4-three-velocity+trapezoid-lift";
  tr.metadata.step = c.dt;
  return tr;
}

}  // namespace

InvariantReport run_invariant_suite(MetricKind kind, int samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("run_invariant_suite: samples must be at least 1");
  const CheckModel cm = check_model(kind);
  const double mass = 1.0;
  const double charge = 1.0;
  const GTensorField gfield = GTensorField::from_metric(cm.metric);
  const LagrangianModel lagrangian(gfield, cm.potential, mass, charge);
  const Connection conn = connection_from(cm.metric, cm.potential, mass, charge);
  const HamiltonianModel h = standard_hamiltonian(cm.metric, cm.potential, mass, charge);
  const PhaseFunction hf = h.as_function();
  const PhaseFunction htf = mass_shell_function(h);

  InvariantReport report;
  report.metric = std::string(metric_id(kind));
  report.seed = seed;
  report.samples = samples;
  std::vector<CheckRecord> checks = {
      {"noether", samples, 0.0, 1e-9, false},          {"projector", samples, 0.0, 1e-12, false},
      {"geodesic_condition", samples, 0.0, 1e-9, false}, {"bracket", samples, 0.0, 1e-12, false},
      {"rhs_equality", samples, 0.0, 1e-8, false},     {"dynamics_lagrangian", samples, 0.0, 1e-9, false},
  };
  auto bump = [&](std::size_t i, double r) {
    checks[i].max_residual = std::isfinite(r) ? std::max(checks[i].max_residual, r) : INFINITY;
  };

  Rng rng(seed);
  for (int k = 0; k < samples; ++k) {
    const Vector x = sample_point(cm.metric, rng);
    const Vector u = sample_shell_velocity(gfield, x, rng);
    const Vector a = rng.uniform_vector(x.size(), -1.0, 1.0);

    bump(0, std::abs(noether_residual(lagrangian, x, u, a)));

    const Matrix P = constraint_projector(lagrangian, x, u);
    const double pn = std::max(1.0, P.norm() * P.norm());
    bump(1, ((P * P - P).norm() + (P * u).norm() / u.norm()) / pn);

    const GeodesicConditionCheck gc = check_geodesic_condition(conn, cm.metric, x, u);
    bump(2, safe_ratio(std::abs(gc.residual), gc.scale));

    const PhaseState ps{x, on_shell_momentum(h, x, u) + rng.uniform_vector(x.size(), -0.1, 0.1)};
    const double br = poisson_bracket(hf, htf, ps);
    const double bscale = hf.grad_x(ps).norm() * htf.grad_p(ps).norm() + hf.grad_p(ps).norm() * htf.grad_x(ps).norm();
    bump(3, std::abs(br) / std::max(1.0, bscale));

    const Vector geo = geodesic_rhs(conn, x, u);
    const Vector ham = second_order_rhs(h, x, u);
    bump(4, safe_ratio((geo - ham).norm(), std::max(geo.norm(), ham.norm())));

    const ELResidual el = variational_derivative(lagrangian, x, u, geo);
    const Vector e_free = euler_lagrange_E(lagrangian, x, u, Vector::Zero(x.size()));
    const double escale = (e_free.norm() + (el.E - e_free).norm()) * std::pow(el.G, -0.5);
    bump(5, safe_ratio(el.cal_E.norm(), escale));
  }
  report.pass = true;
  for (auto& c : checks) {
    c.pass = c.max_residual <= c.tolerance;
    report.pass = report.pass && c.pass;
  }
  report.checks = std::move(checks);
  return report;
}

std::string report_json(const InvariantReport& report) {
  json j;
  j["metric"] = report.metric;
  j["seed"] = report.seed;
  j["samples"] = report.samples;
  j["checks"] = json::array();
  for (const auto& c : report.checks) {
    j["checks"].push_back(
        {{"name", c.name}, {"samples", c.samples}, {"max_residual", c.max_residual}, {"tolerance", c.tolerance},
         {"pass", c.pass}});
  }
  j["pass"] = report.pass;
  return j.dump(2) + "\n";
}

int cmd_simulate(const std::string& config_path, std::ostream& out, std::ostream& err) {
  Scenario s = [&] { return build_scenario(load_config(config_path)); }();
  const ScenarioConfig& c = s.config;
  json report;
  report["scenario"] = std::string(scenario_name(c.kind));
  try {
    switch (c.kind) {
      case ScenarioKind::geodesic:
      case ScenarioKind::three_velocity: {
        const Trajectory tr = c.kind == ScenarioKind::geodesic ? run_geodesic(s, c.every) : run_three_velocity(s);
        if (!c.csv.empty()) write_csv(c.csv, [&](std::ostream& f) { write_trajectory_csv(f, tr); });
        for (const auto& w : tr.metadata.warnings) err << "warning: " << w << "\n";
        out << fmt::format("{}: {} samples, max |G - 1| = {:.6e}\n", scenario_name(c.kind), tr.samples.size(),
                           tr.metadata.max_constraint_drift);
        report["samples"] = tr.samples.size();
        report["metadata"] = metadata_json(tr.metadata);
        break;
      }
      case ScenarioKind::hamiltonian: {
        const PhaseTrajectory tr = run_hamiltonian(s, c.charge, c.every);
        if (!c.csv.empty()) write_csv(c.csv, [&](std::ostream& f) { write_phase_trajectory_csv(f, tr); });
        for (const auto& w : tr.metadata.warnings) err << "warning: " << w << "\n";
        out << fmt::format("hamiltonian: {} samples, max |H_T| = {:.6e}\n", tr.samples.size(),
                           tr.metadata.max_constraint_drift);
        report["samples"] = tr.samples.size();
        report["metadata"] = metadata_json(tr.metadata);
        break;
      }
      case ScenarioKind::compare:
        throw ConfigError("scenario.kind", "compare scenarios run with the compare command");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    err << runtime_message(e) << "\n";
    return kRuntime;
  }
  if (!c.json.empty()) write_file(c.json, report.dump(2) + "\n");
  return kPass;
}

int cmd_check(const std::string& metric, int samples, std::uint64_t seed, const std::string& json_path,
              std::ostream& out, std::ostream& err) {
  const auto kind = parse_metric_id(metric);
  if (!kind) {
    err << fmt::format("--metric: unknown metric '{}'\n", metric);
    return kUsage;
  }
  if (samples < 1) {
    err << "--samples: must be at least 1\n";
    return kUsage;
  }
  const InvariantReport report = run_invariant_suite(*kind, samples, seed);
  const std::string text = report_json(report);
  out << text;
  if (!json_path.empty()) write_file(json_path, text);
  return report.pass ? kPass : kFail;
}

int cmd_boost(double alpha, const std::string& v, std::ostream& out, std::ostream& err) {
  std::vector<double> parts;
  std::size_t start = 0;
  while (start <= v.size()) {
    const std::size_t end = std::min(v.find(',', start), v.size());
    const std::string item = v.substr(start, end - start);
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(d)) {
      err << fmt::format("--v: '{}' is not a real number\n", item);
      return kUsage;
    }
    parts.push_back(d);
    start = end + 1;
  }
  if (parts.size() != 3) {
    err << fmt::format("--v: expected 3 comma-separated values, got {}\n", parts.size());
    return kUsage;
  }
  if (!std::isfinite(alpha)) {
    err << "--alpha: must be finite\n";
    return kUsage;
  }
  try {
    const Eigen::Vector3d w = boost_three(alpha, {parts[0], parts[1], parts[2]});
    // + 0.0 turns a negative zero into zero
    out << fmt::format("{:.17g},{:.17g},{:.17g}\n", w[0] + 0.0, w[1] + 0.0, w[2] + 0.0);
  } catch (const ProjectiveInfinity& e) {
    err << e.what() << "\n";
    return kRuntime;
  }
  return kPass;
}

int cmd_compare(const std::string& config_path, std::ostream& out, std::ostream& err) {
  const Scenario s = build_scenario(load_config(config_path));
  const ScenarioConfig& c = s.config;
  if (c.kind != ScenarioKind::compare) throw ConfigError("scenario.kind", "the compare command needs kind = compare");
  Trajectory geo;
  PhaseTrajectory ham;
  try {
    geo = run_geodesic(s, 1);
    ham = run_hamiltonian(s, c.hamiltonian_charge.value_or(c.charge), 1);
  } catch (const Error& e) {
    err << runtime_message(e) << "\n";
    return kRuntime;
  }
  double divergence = 0.0;
  for (std::size_t k = 0; k < geo.samples.size(); ++k) {
    divergence = std::max(divergence, (geo.samples[k].x - ham.samples[k].x).lpNorm<Eigen::Infinity>());
  }
  const bool pass = divergence <= c.tolerance;
  json j;
  j["divergence"] = divergence;
  j["tolerance"] = c.tolerance;
  j["geodesic_max_constraint_drift"] = geo.metadata.max_constraint_drift;
  j["hamiltonian_max_constraint_drift"] = ham.metadata.max_constraint_drift;
  j["tau_end"] = geo.samples.back().tau;
  j["pass"] = pass;
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!c.json.empty()) write_file(c.json, text);
  return pass ? kPass : kFail;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relativistic mechanics on pseudo-Riemannian manifolds", "relmech"};
  app.require_subcommand(1);

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Integrate a scenario and write its trajectory");
  simulate->add_option("config", config_path, "Scenario file")->required();

  std::string metric;
  int samples = 1000;
  std::uint64_t seed = 0;
  std::string json_path;
  auto* check = app.add_subcommand("check", "Run the invariant suite on random states");
  check->add_option("--metric", metric, "Catalog metric id")->required();
  check->add_option("--samples", samples, "Number of states")->capture_default_str();
  check->add_option("--seed", seed, "Generator seed")->capture_default_str();
  check->add_option("--json", json_path, "Also write the report to this file");

  double alpha = 0.0;
  std::string v;
  auto* boost = app.add_subcommand("boost", "Boost a three-velocity along the first axis");
  boost->add_option("--alpha", alpha, "Rapidity")->required();
  boost->add_option("--v", v, "Three-velocity v1,v2,v3")->required()->allow_extra_args(false);

  auto* compare = app.add_subcommand("compare", "Compare geodesic and Hamiltonian integrations");
  compare->add_option("config", config_path, "Scenario file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kPass;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(config_path, out, err);
    if (*check) return cmd_check(metric, samples, seed, json_path, out, err);
    if (*boost) return cmd_boost(alpha, v, out, err);
    if (*compare) return cmd_compare(config_path, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}

}  // namespace relmech::cli
