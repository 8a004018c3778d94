#include "relmech/geometry.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "relmech/errors.hpp"

namespace relmech {

namespace {

constexpr double kMaxCondition = 1e12;
constexpr int kMaxDim = 8;

void require_dim(const Vector& x, int dim, const char* what) {
  if (x.size() != dim) {
    throw DimensionMismatch(fmt::format("{}: expected a point of dimension {}, got {}", what, dim, x.size()));
  }
}

}  // namespace

std::string_view metric_id(MetricKind kind) {
  switch (kind) {
    case MetricKind::minkowski:
      return "minkowski";
    case MetricKind::euclidean:
      return "euclidean";
    case MetricKind::schwarzschild:
      return "schwarzschild";
    case MetricKind::diagonal:
      return "diagonal";
    case MetricKind::custom:
      break;
  }
  return {};
}

std::optional<MetricKind> parse_metric_id(std::string_view id) {
  for (MetricKind k : {MetricKind::minkowski, MetricKind::euclidean, MetricKind::schwarzschild,
                       MetricKind::diagonal}) {
    if (metric_id(k) == id) return k;
  }
  return std::nullopt;
}

double fd_step(double xi) {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return base * std::max(1.0, std::abs(xi));
}

// ---------------------------------------------------------------------------
// MetricField

MetricField::MetricField(int dim, ValueFn value, PartialsFn partials, DomainFn domain)
    : dim_(dim), value_(std::move(value)), partials_(std::move(partials)), domain_(std::move(domain)) {
  if (dim < 2 || dim > kMaxDim) {
    throw InvalidArgument(fmt::format("MetricField: dimension must be in [2, {}], got {}", kMaxDim, dim));
  }
  if (!value_) throw InvalidArgument("MetricField: value function is required");
}

MetricField MetricField::minkowski(int dim) {
  if (dim < 2) throw InvalidArgument("minkowski: dimension must be at least 2");
  Matrix eta = -Matrix::Identity(dim, dim);
  eta(0, 0) = 1.0;
  MetricField f(
      dim, [eta](const Vector&) { return eta; },
      [dim](const Vector&) { return Rank3(static_cast<std::size_t>(dim), Matrix::Zero(dim, dim)); });
  f.kind_ = MetricKind::minkowski;
  return f;
}

MetricField MetricField::euclidean(int dim) {
  if (dim < 2) throw InvalidArgument("euclidean: dimension must be at least 2");
  MetricField f(
      dim, [dim](const Vector&) { return Matrix::Identity(dim, dim); },
      [dim](const Vector&) { return Rank3(static_cast<std::size_t>(dim), Matrix::Zero(dim, dim)); });
  f.kind_ = MetricKind::euclidean;
  return f;
}

MetricField MetricField::diagonal(std::vector<double> entries) {
  const int dim = static_cast<int>(entries.size());
  if (dim < 2) throw InvalidArgument("diagonal: at least two entries are required");
  Matrix g = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double d = entries[static_cast<std::size_t>(i)];
    if (!std::isfinite(d) || d == 0.0) {
      throw InvalidArgument(fmt::format("diagonal: entry {} must be finite and non-zero", i));
    }
    g(i, i) = d;
  }
  MetricField f(
      dim, [g](const Vector&) { return g; },
      [dim](const Vector&) { return Rank3(static_cast<std::size_t>(dim), Matrix::Zero(dim, dim)); });
  f.kind_ = MetricKind::diagonal;
  return f;
}

MetricField MetricField::schwarzschild(double mass) {
  if (!std::isfinite(mass) || mass < 0.0) {
    throw InvalidArgument("schwarzschild: mass parameter M must be finite and non-negative");
  }
  const double horizon = 2.0 * mass * (1.0 + 1e-9);
  auto domain = [mass, horizon](const Vector& x) {
    const double r = x[1];
    if (!(r > horizon) || !(r > 0.0)) {
      throw DomainError(
          fmt::format("schwarzschild: point outside the manifold domain (r = {} must exceed 2M = {})", r,
                      2.0 * mass));
    }
  };
  auto value = [mass](const Vector& x) {
    const double r = x[1];
    const double s = std::sin(x[2]);
    const double f = 1.0 - 2.0 * mass / r;
    Matrix g = Matrix::Zero(4, 4);
    g(0, 0) = f;
    g(1, 1) = -1.0 / f;
    g(2, 2) = -r * r;
    g(3, 3) = -r * r * s * s;
    return g;
  };
  auto partials = [mass](const Vector& x) {
    const double r = x[1];
    const double s = std::sin(x[2]);
    const double c = std::cos(x[2]);
    const double f = 1.0 - 2.0 * mass / r;
    const double df = 2.0 * mass / (r * r);
    Rank3 d(4, Matrix::Zero(4, 4));
    d[1](0, 0) = df;
    d[1](1, 1) = df / (f * f);
    d[1](2, 2) = -2.0 * r;
    d[1](3, 3) = -2.0 * r * s * s;
    d[2](3, 3) = -2.0 * r * r * s * c;
    return d;
  };
  MetricField f(4, value, partials, domain);
  f.kind_ = MetricKind::schwarzschild;
  f.mass_ = mass;
  return f;
}

void MetricField::check_point(const Vector& x) const {
  require_dim(x, dim_, "metric");
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw DomainError("metric: point has non-finite coordinates");
  }
  if (domain_) domain_(x);
}

Matrix MetricField::value(const Vector& x) const {
  check_point(x);
  Matrix g = value_(x);
  if (g.rows() != dim_ || g.cols() != dim_) {
    throw DimensionMismatch("metric: value function returned a matrix of the wrong shape");
  }
  if (kind_ == MetricKind::custom) g = 0.5 * (g + g.transpose()).eval();
  return g;
}

Rank3 MetricField::partials(const Vector& x) const {
  if (!partials_) return fd_partials(x);
  check_point(x);
  Rank3 d = partials_(x);
  if (static_cast<int>(d.size()) != dim_) {
    throw DimensionMismatch("metric: partials function returned the wrong number of slices");
  }
  return d;
}

Rank3 MetricField::fd_partials(const Vector& x) const {
  check_point(x);
  Rank3 d;
  d.reserve(static_cast<std::size_t>(dim_));
  for (int l = 0; l < dim_; ++l) {
    const double h = fd_step(x[l]);
    Vector xp = x;
    Vector xm = x;
    xp[l] += h;
    xm[l] -= h;
    d.push_back((value(xp) - value(xm)) / (xp[l] - xm[l]));
  }
  return d;
}

Matrix metric_at(const MetricField& metric, const Vector& x) { return metric.value(x); }

Matrix invert_metric(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g, Eigen::EigenvaluesOnly);
  const Vector mags = eig.eigenvalues().cwiseAbs();
  const double lo = mags.minCoeff();
  const double hi = mags.maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxCondition) {
    throw SingularMetric(fmt::format("metric is singular or ill-conditioned (condition number {:.3g})",
                                     lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity()));
  }
  return g.partialPivLu().inverse();
}

Matrix inverse_metric_at(const MetricField& metric, const Vector& x) { return invert_metric(metric.value(x)); }

Rank3 christoffel_from(const Matrix& g_inv, const Rank3& dg) {
  const auto m = g_inv.rows();
  // Lowered symbol: low[b](mu, nu) = d_mu g_{b nu} + d_nu g_{b mu} - d_b g_{mu nu}.
  Rank3 low(static_cast<std::size_t>(m), Matrix::Zero(m, m));
  for (Eigen::Index b = 0; b < m; ++b) {
    for (Eigen::Index mu = 0; mu < m; ++mu) {
      for (Eigen::Index nu = 0; nu < m; ++nu) {
        low[static_cast<std::size_t>(b)](mu, nu) = dg[static_cast<std::size_t>(mu)](b, nu) +
                                                   dg[static_cast<std::size_t>(nu)](b, mu) -
                                                   dg[static_cast<std::size_t>(b)](mu, nu);
      }
    }
  }
  Rank3 out(static_cast<std::size_t>(m), Matrix::Zero(m, m));
  for (Eigen::Index l = 0; l < m; ++l) {
    for (Eigen::Index b = 0; b < m; ++b) {
      const double gi = g_inv(l, b);
      if (gi != 0.0) out[static_cast<std::size_t>(l)] -= 0.5 * gi * low[static_cast<std::size_t>(b)];
    }
  }
  return out;
}

Rank3 christoffel_at(const MetricField& metric, const Vector& x) {
  return christoffel_from(inverse_metric_at(metric, x), metric.partials(x));
}

// ---------------------------------------------------------------------------
// PotentialField

PotentialField::PotentialField(int dim, ValueFn value, PartialsFn partials)
    : dim_(dim), value_(std::move(value)), partials_(std::move(partials)) {
  if (dim < 2 || dim > kMaxDim) {
    throw InvalidArgument(fmt::format("PotentialField: dimension must be in [2, {}], got {}", kMaxDim, dim));
  }
  if (!value_) throw InvalidArgument("PotentialField: value function is required");
}

PotentialField PotentialField::zero(int dim) {
  return PotentialField(
      dim, [dim](const Vector&) { return Vector::Zero(dim).eval(); },
      [dim](const Vector&) { return Matrix::Zero(dim, dim).eval(); });
}

PotentialField PotentialField::constant(Vector a) {
  const int dim = static_cast<int>(a.size());
  return PotentialField(
      dim, [a](const Vector&) { return a; }, [dim](const Vector&) { return Matrix::Zero(dim, dim).eval(); });
}

PotentialField PotentialField::linear(Vector offset, Matrix slope) {
  const int dim = static_cast<int>(offset.size());
  if (slope.rows() != dim || slope.cols() != dim) {
    throw DimensionMismatch("PotentialField::linear: slope must be a square matrix matching the offset");
  }
  const Matrix partials = slope.transpose();
  return PotentialField(
      dim, [offset, slope](const Vector& x) { return (offset + slope * x).eval(); },
      [partials](const Vector&) { return partials; });
}

PotentialField PotentialField::uniform_field(const Eigen::Vector3d& e_field, const Eigen::Vector3d& b_field) {
  Matrix slope = Matrix::Zero(4, 4);
  for (int i = 0; i < 3; ++i) slope(0, i + 1) = e_field[i];
  // A_i = -1/2 eps_{ijk} x^j B_k
  slope(1, 2) = -0.5 * b_field[2];
  slope(1, 3) = 0.5 * b_field[1];
  slope(2, 1) = 0.5 * b_field[2];
  slope(2, 3) = -0.5 * b_field[0];
  slope(3, 1) = -0.5 * b_field[1];
  slope(3, 2) = 0.5 * b_field[0];
  return linear(Vector::Zero(4), slope);
}

PotentialField PotentialField::coulomb(double q, const Eigen::Vector3d& center) {
  auto value = [q, center](const Vector& x) {
    const Eigen::Vector3d d = x.segment<3>(1) - center;
    const double r = d.norm();
    if (!(r > 0.0)) throw DomainError("coulomb: potential is singular at its center");
    Vector a = Vector::Zero(4);
    a[0] = q / r;
    return a;
  };
  auto partials = [q, center](const Vector& x) {
    const Eigen::Vector3d d = x.segment<3>(1) - center;
    const double r = d.norm();
    if (!(r > 0.0)) throw DomainError("coulomb: potential is singular at its center");
    Matrix p = Matrix::Zero(4, 4);
    for (int i = 0; i < 3; ++i) p(i + 1, 0) = -q * d[i] / (r * r * r);
    return p;
  };
  return PotentialField(4, value, partials);
}

Vector PotentialField::value(const Vector& x) const {
  require_dim(x, dim_, "potential");
  Vector a = value_(x);
  if (a.size() != dim_) throw DimensionMismatch("potential: value function returned the wrong dimension");
  return a;
}

Matrix PotentialField::partials(const Vector& x) const {
  require_dim(x, dim_, "potential");
  if (partials_) {
    Matrix p = partials_(x);
    if (p.rows() != dim_ || p.cols() != dim_) {
      throw DimensionMismatch("potential: partials function returned the wrong shape");
    }
    return p;
  }
  Matrix p(dim_, dim_);
  for (int l = 0; l < dim_; ++l) {
    const double h = fd_step(x[l]);
    Vector xp = x;
    Vector xm = x;
    xp[l] += h;
    xm[l] -= h;
    p.row(l) = ((value(xp) - value(xm)) / (xp[l] - xm[l])).transpose();
  }
  return p;
}

Matrix faraday_at(const PotentialField& potential, const Vector& x) {
  const Matrix p = potential.partials(x);
  return p - p.transpose();
}

// ---------------------------------------------------------------------------
// GTensorField

GTensorField::GTensorField(int dim, int order_half, ValueFn value, PartialsFn partials)
    : dim_(dim), order_half_(order_half) {
  if (order_half < 1 || order_half > 2) {
    throw Unsupported(fmt::format("GTensorField: only N = 1 and N = 2 are supported, got N = {}", order_half));
  }
  if (dim < 2 || dim > kMaxDim) {
    throw InvalidArgument(fmt::format("GTensorField: dimension must be in [2, {}], got {}", kMaxDim, dim));
  }
  if (!value) throw InvalidArgument("GTensorField: value function is required");
  const int rank = 2 * order_half;
  value_ = [value = std::move(value), dim, rank](const Vector& x) {
    DenseTensor t = value(x);
    if (t.dim() != dim || t.rank() != rank) {
      throw DimensionMismatch("GTensorField: value function returned a tensor of the wrong shape");
    }
    return t.symmetrized();
  };
  if (partials) {
    partials_ = [partials = std::move(partials), dim, rank](const Vector& x) {
      std::vector<DenseTensor> d = partials(x);
      if (static_cast<int>(d.size()) != dim) {
        throw DimensionMismatch("GTensorField: partials function returned the wrong number of slices");
      }
      for (auto& t : d) {
        if (t.dim() != dim || t.rank() != rank) {
          throw DimensionMismatch("GTensorField: partial has the wrong shape");
        }
        t = t.symmetrized();
      }
      return d;
    };
  }
}

GTensorField GTensorField::from_metric(const MetricField& metric) { return metric_power(metric, 1); }

GTensorField GTensorField::metric_power(const MetricField& metric, int order_half) {
  const int dim = metric.dim();
  auto value = [metric, order_half](const Vector& x) {
    const DenseTensor g = DenseTensor::from_matrix(metric.value(x));
    DenseTensor t = g;
    for (int k = 1; k < order_half; ++k) t = DenseTensor::outer(t, g);
    return t;
  };
  // d_l sym(g^N) = N sym(d_l g (x) g^(N-1))
  auto partials = [metric, order_half](const Vector& x) {
    const DenseTensor g = DenseTensor::from_matrix(metric.value(x));
    const Rank3 dg = metric.partials(x);
    std::vector<DenseTensor> out;
    out.reserve(dg.size());
    for (const Matrix& slice : dg) {
      DenseTensor t = DenseTensor::from_matrix(slice);
      for (int k = 1; k < order_half; ++k) t = DenseTensor::outer(t, g);
      t *= static_cast<double>(order_half);
      out.push_back(std::move(t));
    }
    return out;
  };
  return GTensorField(dim, order_half, value, partials);
}

GTensorField GTensorField::constant(const DenseTensor& value) {
  if (value.rank() % 2 != 0) throw InvalidArgument("GTensorField::constant: rank must be even");
  const int dim = value.dim();
  const int rank = value.rank();
  const DenseTensor sym = value.symmetrized();
  return GTensorField(
      dim, rank / 2, [sym](const Vector&) { return sym; },
      [dim, rank](const Vector&) {
        return std::vector<DenseTensor>(static_cast<std::size_t>(dim), DenseTensor(dim, rank));
      });
}

DenseTensor GTensorField::value(const Vector& x) const {
  require_dim(x, dim_, "G-tensor field");
  return value_(x);
}

std::vector<DenseTensor> GTensorField::partials(const Vector& x) const {
  require_dim(x, dim_, "G-tensor field");
  if (partials_) return partials_(x);
  std::vector<DenseTensor> d;
  d.reserve(static_cast<std::size_t>(dim_));
  for (int l = 0; l < dim_; ++l) {
    const double h = fd_step(x[l]);
    Vector xp = x;
    Vector xm = x;
    xp[l] += h;
    xm[l] -= h;
    DenseTensor t = value_(xp);
    t += -1.0 * value_(xm);
    t *= 1.0 / (xp[l] - xm[l]);
    d.push_back(std::move(t));
  }
  return d;
}

double g_value(const GTensorField& gfield, const Vector& x, const Vector& u) {
  if (u.size() != gfield.dim()) {
    throw DimensionMismatch(
        fmt::format("g_value: expected a vector of dimension {}, got {}", gfield.dim(), u.size()));
  }
  return gfield.value(x).full(u);
}

}  // namespace relmech
