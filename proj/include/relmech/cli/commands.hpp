#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "relmech/geometry.hpp"

namespace relmech::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kRuntime = 3 };

struct CheckRecord {
  std::string name;
  int samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct InvariantReport {
  std::string metric;
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<CheckRecord> checks;
  bool pass = false;
};

/// Cross-module invariant suite on `samples` seeded random states of a
/// catalog metric. The same (metric, samples, seed) gives the same report.
InvariantReport run_invariant_suite(MetricKind metric, int samples, std::uint64_t seed);

std::string report_json(const InvariantReport& report);

int cmd_simulate(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_check(const std::string& metric, int samples, std::uint64_t seed, const std::string& json_path,
              std::ostream& out, std::ostream& err);
int cmd_boost(double alpha, const std::string& v, std::ostream& out, std::ostream& err);
int cmd_compare(const std::string& config_path, std::ostream& out, std::ostream& err);

/// Parses the command line (without the program name) and dispatches.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relmech::cli
