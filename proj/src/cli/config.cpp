#include "relmech/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "relmech/dynamics.hpp"

namespace relmech::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scenario", {"kind"}},
      {"manifold", {"dimension", "metric", "M", "diag"}},
      {"potential", {"kind", "E", "B", "q", "center"}},
      {"particle", {"mass", "charge", "x0", "u0", "v0", "sign", "normalize"}},
      {"integrator", {"dt", "steps", "projection"}},
      {"output", {"csv", "every", "json"}},
      {"compare", {"tolerance", "hamiltonian_charge"}},
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& key) const {
    auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!v) return std::nullopt;
    return boost::trim_copy(*v);
  }

  std::optional<double> real(const std::string& key) const {
    auto s = raw(key);
    if (!s) return std::nullopt;
    return parse_real(key, *s);
  }

  std::optional<int> integer(const std::string& key) const {
    auto s = raw(key);
    if (!s) return std::nullopt;
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(*s, &used);
    } catch (const std::exception&) {
      throw ConfigError(key, fmt::format("'{}' is not an integer", *s));
    }
    if (used != s->size() || v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      throw ConfigError(key, fmt::format("'{}' is not an integer", *s));
    }
    return static_cast<int>(v);
  }

  std::optional<bool> boolean(const std::string& key) const {
    auto s = raw(key);
    if (!s) return std::nullopt;
    const std::string v = boost::to_lower_copy(*s);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, fmt::format("'{}' is not a boolean", *s));
  }

  std::optional<std::vector<double>> reals(const std::string& key) const {
    auto s = raw(key);
    if (!s) return std::nullopt;
    std::vector<std::string> parts;
    boost::split(parts, *s, boost::is_any_of(","));
    std::vector<double> out;
    for (auto& p : parts) out.push_back(parse_real(key, boost::trim_copy(p)));
    return out;
  }

 private:
  static double parse_real(const std::string& key, const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError(key, fmt::format("'{}' is not a real number", s));
    }
    if (used != s.size() || !std::isfinite(v)) throw ConfigError(key, fmt::format("'{}' is not a real number", s));
    return v;
  }

  const pt::ptree& tree_;
};

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::Vector3d three(const Reader& r, const std::string& key) {
  auto v = r.reals(key);
  if (!v) return Eigen::Vector3d::Zero();
  if (v->size() != 3) throw ConfigError(key, fmt::format("expected 3 values, got {}", v->size()));
  return {(*v)[0], (*v)[1], (*v)[2]};
}

void check_keys(const pt::ptree& tree) {
  const auto& keys = known_keys();
  for (const auto& [section, body] : tree) {
    auto it = keys.find(section);
    if (it == keys.end()) throw ConfigError(section, "unknown section");
    if (body.empty() && !body.data().empty()) throw ConfigError(section, "expected a section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
    }
  }
}

}  // namespace

std::string_view scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::geodesic:
      return "geodesic";
    case ScenarioKind::hamiltonian:
      return "hamiltonian";
    case ScenarioKind::compare:
      return "compare";
    case ScenarioKind::three_velocity:
      return "three_velocity";
  }
  return {};
}

ScenarioConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config", fmt::format("line {}: {}", e.line(), e.message()));
  }
  check_keys(tree);
  const Reader r(tree);
  ScenarioConfig c;

  const auto kind = r.raw("scenario.kind");
  if (!kind) throw ConfigError("scenario.kind", "missing");
  if (*kind == "geodesic") {
    c.kind = ScenarioKind::geodesic;
  } else if (*kind == "hamiltonian") {
    c.kind = ScenarioKind::hamiltonian;
  } else if (*kind == "compare") {
    c.kind = ScenarioKind::compare;
  } else if (*kind == "three_velocity") {
    c.kind = ScenarioKind::three_velocity;
  } else {
    throw ConfigError("scenario.kind", fmt::format("unknown scenario '{}'", *kind));
  }

  c.dimension = r.integer("manifold.dimension").value_or(4);
  if (c.dimension < 2 || c.dimension > 8) throw ConfigError("manifold.dimension", "must be between 2 and 8");
  const auto metric = r.raw("manifold.metric");
  if (!metric) throw ConfigError("manifold.metric", "missing");
  const auto kind_id = parse_metric_id(*metric);
  if (!kind_id) throw ConfigError("manifold.metric", fmt::format("unknown metric '{}'", *metric));
  c.metric = *kind_id;
  c.M = r.real("manifold.M").value_or(1.0);
  if (c.metric == MetricKind::schwarzschild) {
    if (!(c.M > 0.0)) throw ConfigError("manifold.M", "must be positive");
    if (c.dimension != 4) throw ConfigError("manifold.dimension", "schwarzschild requires dimension 4");
  }
  if (c.metric == MetricKind::diagonal) {
    auto d = r.reals("manifold.diag");
    if (!d) throw ConfigError("manifold.diag", "required for the diagonal metric");
    if (static_cast<int>(d->size()) != c.dimension) {
      throw ConfigError("manifold.diag", fmt::format("expected {} values, got {}", c.dimension, d->size()));
    }
    c.diag = *d;
  }

  c.potential = r.raw("potential.kind").value_or("none");
  if (c.potential != "none" && c.potential != "uniform_field" && c.potential != "coulomb") {
    throw ConfigError("potential.kind", fmt::format("unknown potential '{}'", c.potential));
  }
  if (c.potential != "none" && c.dimension != 4) {
    throw ConfigError("potential.kind", "field potentials require dimension 4");
  }
  c.E = three(r, "potential.E");
  c.B = three(r, "potential.B");
  c.center = three(r, "potential.center");
  c.q = r.real("potential.q").value_or(0.0);

  c.mass = r.real("particle.mass").value_or(1.0);
  if (!(c.mass > 0.0)) throw ConfigError("particle.mass", "must be positive");
  c.charge = r.real("particle.charge").value_or(1.0);
  auto x0 = r.reals("particle.x0");
  if (!x0) throw ConfigError("particle.x0", "missing");
  if (static_cast<int>(x0->size()) != c.dimension) {
    throw ConfigError("particle.x0", fmt::format("expected {} values, got {}", c.dimension, x0->size()));
  }
  c.x0 = to_vector(*x0);
  auto u0 = r.reals("particle.u0");
  auto v0 = r.reals("particle.v0");
  if (u0 && v0) throw ConfigError("particle.u0", "give exactly one of particle.u0 and particle.v0");
  if (!u0 && !v0) throw ConfigError("particle.u0", "one of particle.u0 and particle.v0 is required");
  if (u0) {
    if (static_cast<int>(u0->size()) != c.dimension) {
      throw ConfigError("particle.u0", fmt::format("expected {} values, got {}", c.dimension, u0->size()));
    }
    c.u0 = to_vector(*u0);
  } else {
    if (static_cast<int>(v0->size()) != c.dimension - 1) {
      throw ConfigError("particle.v0", fmt::format("expected {} values, got {}", c.dimension - 1, v0->size()));
    }
    c.v0 = to_vector(*v0);
  }
  c.sign = r.integer("particle.sign").value_or(1);
  if (c.sign != 1 && c.sign != -1) throw ConfigError("particle.sign", "must be +1 or -1");
  c.normalize = r.boolean("particle.normalize").value_or(false);

  c.dt = r.real("integrator.dt").value_or(1e-3);
  if (!(c.dt > 0.0)) throw ConfigError("integrator.dt", "must be positive");
  c.steps = r.integer("integrator.steps").value_or(10000);
  if (c.steps < 1) throw ConfigError("integrator.steps", "must be at least 1");
  const std::string projection = r.raw("integrator.projection").value_or("none");
  if (projection == "none") {
    c.projection = Projection::none;
  } else if (projection == "rescale") {
    c.projection = Projection::rescale;
  } else {
    throw ConfigError("integrator.projection", fmt::format("unknown projection '{}'", projection));
  }

  c.csv = r.raw("output.csv").value_or("");
  c.json = r.raw("output.json").value_or("");
  c.every = r.integer("output.every").value_or(1);
  if (c.every < 1) throw ConfigError("output.every", "must be at least 1");

  c.tolerance = r.real("compare.tolerance").value_or(1e-6);
  if (!(c.tolerance > 0.0)) throw ConfigError("compare.tolerance", "must be positive");
  c.hamiltonian_charge = r.real("compare.hamiltonian_charge");
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", fmt::format("cannot read '{}'", path));
  return parse_config(in);
}

MetricField make_metric(MetricKind kind, int dimension, double M, const std::vector<double>& diag) {
  switch (kind) {
    case MetricKind::minkowski:
      return MetricField::minkowski(dimension);
    case MetricKind::euclidean:
      return MetricField::euclidean(dimension);
    case MetricKind::schwarzschild:
      return MetricField::schwarzschild(M);
    case MetricKind::diagonal:
      return MetricField::diagonal(diag);
    case MetricKind::custom:
      break;
  }
  throw InvalidArgument("make_metric: custom metrics have no catalog constructor");
}

Scenario build_scenario(const ScenarioConfig& c) {
  MetricField metric = [&] {
    try {
      return make_metric(c.metric, c.dimension, c.M, c.diag);
    } catch (const Error& e) {
      throw ConfigError("manifold.metric", e.what());
    }
  }();
  try {
    metric.check_point(c.x0);
    invert_metric(metric.value(c.x0));
  } catch (const Error& e) {
    throw ConfigError("particle.x0", e.what());
  }

  PotentialField potential = PotentialField::zero(c.dimension);
  if (c.potential == "uniform_field") {
    potential = PotentialField::uniform_field(c.E, c.B);
  } else if (c.potential == "coulomb") {
    potential = PotentialField::coulomb(c.q, c.center);
    try {
      potential.value(c.x0);
    } catch (const Error& e) {
      throw ConfigError("particle.x0", e.what());
    }
  }

  GTensorField gfield = GTensorField::from_metric(metric);
  FourState start;
  if (c.u0) {
    start = FourState{c.x0, *c.u0};
    if (c.normalize) {
      try {
        start.u = project_to_shell(gfield, start.x, start.u);
      } catch (const Error& e) {
        throw ConfigError("particle.u0", e.what());
      }
    }
    if (!(g_value(gfield, start.x, start.u) > 0.0)) {
      throw ConfigError("particle.u0", "G(x0, u0) must be positive");
    }
  } else {
    ThreeVelocity t{c.x0[0], c.x0.tail(c.dimension - 1), *c.v0};
    try {
      start = four_from_three(t, gfield, c.sign);
    } catch (const Error& e) {
      throw ConfigError("particle.v0", e.what());
    }
  }
  return Scenario{c, std::move(metric), std::move(potential), std::move(gfield), std::move(start)};
}

}  // namespace relmech::cli
