#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "relmech/tensor.hpp"

namespace relmech {

enum class Projection { none, rescale };

std::string_view projection_name(Projection p);

struct TrajectorySample {
  double tau = 0.0;
  Vector x;
  Vector u;
  double G = 0.0;
};

struct TrajectoryMetadata {
  std::string integrator;
  double step = 0.0;
  Projection projection = Projection::none;
  /// max |G - 1| over every integration step, not only recorded samples.
  double max_constraint_drift = 0.0;
  std::vector<std::string> warnings;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  TrajectoryMetadata metadata;
};

struct PhaseSample {
  double tau = 0.0;
  Vector x;
  Vector p;
  double H = 0.0;
  double HT = 0.0;
};

struct PhaseTrajectory {
  std::vector<PhaseSample> samples;
  /// max_constraint_drift holds max |H_T| over every step.
  TrajectoryMetadata metadata;
};

/// Header `tau,x0..x{m-1},u0..u{m-1},G`; values with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
/// Header `tau,x0..x{m-1},p0..p{m-1},H,HT`.
void write_phase_trajectory_csv(std::ostream& out, const PhaseTrajectory& trajectory);

/// Reads back a file produced by write_trajectory_csv (metadata is not stored).
Trajectory read_trajectory_csv(std::istream& in);
PhaseTrajectory read_phase_trajectory_csv(std::istream& in);

}  // namespace relmech
