#include "relmech/trajectory.hpp"

#include <istream>
#include <algorithm>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "relmech/errors.hpp"

namespace relmech {

namespace {

void write_header(std::ostream& out, Eigen::Index m, char vel, std::initializer_list<std::string_view> tail) {
  std::string line = "tau";
  for (Eigen::Index i = 0; i < m; ++i) line += fmt::format(",x{}", i);
  for (Eigen::Index i = 0; i < m; ++i) line += fmt::format(",{}{}", vel, i);
  for (auto t : tail) line += fmt::format(",{}", t);
  out << line << '\n';
}

void append(std::string& line, double v) {
  line += ',';
  line += fmt::format("{:.17g}", v);
}

std::vector<std::vector<double>> read_rows(std::istream& in, std::size_t expected_cols) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw InvalidArgument(fmt::format("trajectory CSV: malformed value '{}'", cell));
      }
    }
    if (row.size() != expected_cols) {
      throw InvalidArgument(
          fmt::format("trajectory CSV: expected {} columns, found {}", expected_cols, row.size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t header_columns(const std::string& header) {
  return static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
}

}  // namespace

std::string_view projection_name(Projection p) { return p == Projection::rescale ? "rescale" : "none"; }

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  const Eigen::Index m = trajectory.samples.empty() ? 0 : trajectory.samples.front().x.size();
  write_header(out, m, 'u', {"G"});
  std::string line;
  for (const auto& s : trajectory.samples) {
    line = fmt::format("{:.17g}", s.tau);
    for (Eigen::Index i = 0; i < m; ++i) append(line, s.x[i]);
    for (Eigen::Index i = 0; i < m; ++i) append(line, s.u[i]);
    append(line, s.G);
    out << line << '\n';
  }
}

void write_phase_trajectory_csv(std::ostream& out, const PhaseTrajectory& trajectory) {
  const Eigen::Index m = trajectory.samples.empty() ? 0 : trajectory.samples.front().x.size();
  write_header(out, m, 'p', {"H", "HT"});
  std::string line;
  for (const auto& s : trajectory.samples) {
    line = fmt::format("{:.17g}", s.tau);
    for (Eigen::Index i = 0; i < m; ++i) append(line, s.x[i]);
    for (Eigen::Index i = 0; i < m; ++i) append(line, s.p[i]);
    append(line, s.H);
    append(line, s.HT);
    out << line << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw InvalidArgument("trajectory CSV: missing header");
  const std::size_t cols = header_columns(header);
  if (cols < 4 || (cols - 2) % 2 != 0) throw InvalidArgument("trajectory CSV: unexpected header");
  const auto m = static_cast<Eigen::Index>((cols - 2) / 2);
  const auto rows = read_rows(in, cols);
  Trajectory t;
  for (const auto& r : rows) {
    TrajectorySample s;
    s.tau = r[0];
    s.x = Eigen::Map<const Vector>(r.data() + 1, m);
    s.u = Eigen::Map<const Vector>(r.data() + 1 + m, m);
    s.G = r[static_cast<std::size_t>(1 + 2 * m)];
    t.samples.push_back(std::move(s));
  }
  return t;
}

PhaseTrajectory read_phase_trajectory_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw InvalidArgument("trajectory CSV: missing header");
  const std::size_t cols = header_columns(header);
  if (cols < 5 || (cols - 3) % 2 != 0) throw InvalidArgument("trajectory CSV: unexpected header");
  const auto m = static_cast<Eigen::Index>((cols - 3) / 2);
  const auto rows = read_rows(in, cols);
  PhaseTrajectory t;
  for (const auto& r : rows) {
    PhaseSample s;
    s.tau = r[0];
    s.x = Eigen::Map<const Vector>(r.data() + 1, m);
    s.p = Eigen::Map<const Vector>(r.data() + 1 + m, m);
    s.H = r[static_cast<std::size_t>(1 + 2 * m)];
    s.HT = r[static_cast<std::size_t>(2 + 2 * m)];
    t.samples.push_back(std::move(s));
  }
  return t;
}

}  // namespace relmech
