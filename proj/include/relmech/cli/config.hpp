#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relmech/errors.hpp"
#include "relmech/geometry.hpp"
#include "relmech/kinematics.hpp"
#include "relmech/trajectory.hpp"

namespace relmech::cli {

/// Invalid configuration; `key()` is the offending `section.key`.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class ScenarioKind { geodesic, hamiltonian, compare, three_velocity };

std::string_view scenario_name(ScenarioKind kind);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::geodesic;

  int dimension = 4;
  MetricKind metric = MetricKind::minkowski;
  double M = 1.0;
  std::vector<double> diag;

  std::string potential = "none";
  Eigen::Vector3d E = Eigen::Vector3d::Zero();
  Eigen::Vector3d B = Eigen::Vector3d::Zero();
  double q = 0.0;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();

  double mass = 1.0;
  double charge = 1.0;
  Vector x0;
  std::optional<Vector> u0;
  std::optional<Vector> v0;
  int sign = 1;
  bool normalize = false;

  double dt = 1e-3;
  int steps = 10000;
  Projection projection = Projection::none;

  std::string csv;
  int every = 1;
  std::string json;

  double tolerance = 1e-6;
  std::optional<double> hamiltonian_charge;
};

/// Parses an INI document with sections scenario, manifold, potential,
/// particle, integrator, output and compare. Unknown keys are rejected.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

/// Fields and initial state built from a validated configuration.
struct Scenario {
  ScenarioConfig config;
  MetricField metric;
  PotentialField potential;
  GTensorField gfield;
  FourState start;
};

/// Builds the fields and the initial four-velocity. Throws ConfigError when
/// the initial point is outside the manifold domain or the velocity cannot
/// be placed on the shell.
Scenario build_scenario(const ScenarioConfig& config);

MetricField make_metric(MetricKind kind, int dimension, double M, const std::vector<double>& diag);

}  // namespace relmech::cli
