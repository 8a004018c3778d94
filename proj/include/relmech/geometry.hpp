#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relmech/tensor.hpp"

namespace relmech {

enum class MetricKind { custom, minkowski, euclidean, schwarzschild, diagonal };

/// Catalog identifier of a metric kind ("minkowski", ...); empty for custom.
std::string_view metric_id(MetricKind kind);

/// Parses an exact catalog identifier. Returns nullopt for unknown strings
/// and for "custom".
std::optional<MetricKind> parse_metric_id(std::string_view id);

/// Central-difference step for coordinate value `xi`: cbrt(eps) * max(1, |xi|).
double fd_step(double xi);

/// Pseudo-Riemannian metric g_{mn}(x) on an m-dimensional chart.
///
/// Custom fields may omit the partials, in which case they are computed by
/// central differences with the `fd_step` heuristic. Values returned by a
/// custom value function are symmetrized. The optional domain guard throws
/// DomainError for points outside the chart.
class MetricField {
 public:
  using ValueFn = std::function<Matrix(const Vector&)>;
  using PartialsFn = std::function<Rank3(const Vector&)>;
  using DomainFn = std::function<void(const Vector&)>;

  MetricField(int dim, ValueFn value, PartialsFn partials = {}, DomainFn domain = {});

  /// diag(1, -1, ..., -1), signature (+,-,...,-).
  static MetricField minkowski(int dim = 4);
  static MetricField euclidean(int dim = 4);
  /// Schwarzschild in (t, r, theta, phi); domain r > 2M(1 + 1e-9).
  static MetricField schwarzschild(double mass);
  /// Constant diagonal metric with the given entries.
  static MetricField diagonal(std::vector<double> entries);

  int dim() const { return dim_; }
  MetricKind kind() const { return kind_; }
  bool has_analytic_partials() const { return static_cast<bool>(partials_); }
  /// Schwarzschild mass parameter; zero for other kinds.
  double mass_parameter() const { return mass_; }

  /// Throws DimensionMismatch or DomainError if x cannot be evaluated.
  void check_point(const Vector& x) const;

  Matrix value(const Vector& x) const;
  /// Analytic partials when available, central differences otherwise.
  Rank3 partials(const Vector& x) const;
  /// Central-difference partials regardless of analytic availability.
  Rank3 fd_partials(const Vector& x) const;

 private:
  int dim_;
  MetricKind kind_ = MetricKind::custom;
  double mass_ = 0.0;
  ValueFn value_;
  PartialsFn partials_;
  DomainFn domain_;
};

Matrix metric_at(const MetricField& metric, const Vector& x);

/// Throws SingularMetric if the condition number of g(x) exceeds 1e12.
Matrix inverse_metric_at(const MetricField& metric, const Vector& x);

/// Inverse of a symmetric matrix with the same conditioning guard.
Matrix invert_metric(const Matrix& g);

/// Connection symbols in the sign convention
///   {_m^l_n} = -1/2 g^{lb} (d_m g_{bn} + d_n g_{bm} - d_b g_{mn}),
/// i.e. minus the textbook Christoffel symbol. Result index order is
/// `c[l](m, n)` = {_m^l_n}.
Rank3 christoffel_at(const MetricField& metric, const Vector& x);

/// The same formula from precomputed inverse metric and partials.
Rank3 christoffel_from(const Matrix& g_inv, const Rank3& dg);

/// One-form A_m(x) with partials `p(l, m)` = d_l A_m.
class PotentialField {
 public:
  using ValueFn = std::function<Vector(const Vector&)>;
  using PartialsFn = std::function<Matrix(const Vector&)>;

  PotentialField(int dim, ValueFn value, PartialsFn partials = {});

  static PotentialField zero(int dim);
  static PotentialField constant(Vector a);
  /// A_m(x) = offset_m + slope(m, n) x^n.
  static PotentialField linear(Vector offset, Matrix slope);
  /// Four-dimensional linear potential with F_{i0} = E_i and
  /// F_{ij} = eps_{ijk} B_k: A_0 = E.x, A_i = -1/2 eps_{ijk} x^j B_k.
  static PotentialField uniform_field(const Eigen::Vector3d& e_field, const Eigen::Vector3d& b_field);
  /// Four-dimensional A_0 = q / |x_spatial - center|, spatial A = 0.
  static PotentialField coulomb(double q, const Eigen::Vector3d& center);

  int dim() const { return dim_; }
  Vector value(const Vector& x) const;
  Matrix partials(const Vector& x) const;

 private:
  int dim_;
  ValueFn value_;
  PartialsFn partials_;
};

/// F_{lm} = d_l A_m - d_m A_l.
Matrix faraday_at(const PotentialField& potential, const Vector& x);

/// Fully symmetric rank-2N tensor field G_{a1..a2N}(x) defining
/// G(x, u) = G_{a1..a2N} u^a1 ... u^a2N. Supported for N in {1, 2}, m <= 8.
class GTensorField {
 public:
  using ValueFn = std::function<DenseTensor(const Vector&)>;
  using PartialsFn = std::function<std::vector<DenseTensor>(const Vector&)>;

  /// Outputs of `value` (and `partials`) are symmetrized on evaluation.
  /// Missing partials fall back to central differences.
  GTensorField(int dim, int order_half, ValueFn value, PartialsFn partials = {});

  /// N = 1 field equal to the metric.
  static GTensorField from_metric(const MetricField& metric);
  /// Symmetrized N-fold tensor power of the metric, G(x, u) = g(u, u)^N.
  static GTensorField metric_power(const MetricField& metric, int order_half);
  static GTensorField constant(const DenseTensor& value);

  int dim() const { return dim_; }
  int order_half() const { return order_half_; }
  int rank() const { return 2 * order_half_; }

  DenseTensor value(const Vector& x) const;
  /// One tensor per coordinate direction: result[l] = d_l G.
  std::vector<DenseTensor> partials(const Vector& x) const;

 private:
  int dim_;
  int order_half_;
  ValueFn value_;
  PartialsFn partials_;
};

/// Full 2N-fold contraction G(x, u).
double g_value(const GTensorField& gfield, const Vector& x, const Vector& u);

}  // namespace relmech
