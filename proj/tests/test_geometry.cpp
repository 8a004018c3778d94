#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "relmech/errors.hpp"
#include "relmech/geometry.hpp"
#include "relmech/sampling.hpp"
#include "support.hpp"

using namespace relmech;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

const Vector kEquator = vec({0.0, 10.0, std::numbers::pi / 2, 0.0});

}  // namespace

TEST(Metric, CatalogIds) {
  EXPECT_EQ(metric_id(MetricKind::schwarzschild), "schwarzschild");
  EXPECT_EQ(parse_metric_id("minkowski"), MetricKind::minkowski);
  EXPECT_EQ(parse_metric_id("diagonal"), MetricKind::diagonal);
  EXPECT_FALSE(parse_metric_id("Minkowski"));
  EXPECT_FALSE(parse_metric_id("custom"));
  EXPECT_FALSE(parse_metric_id(""));
}

TEST(Metric, MinkowskiValue) {
  const Matrix g = metric_at(MetricField::minkowski(4), Vector::Zero(4));
  EXPECT_EQ(g, Vector(vec({1, -1, -1, -1})).asDiagonal().toDenseMatrix());
  EXPECT_EQ(metric_at(MetricField::euclidean(3), Vector::Ones(3)), Matrix::Identity(3, 3));
}

TEST(Metric, SchwarzschildEquatorValues) {
  const Matrix g = metric_at(MetricField::schwarzschild(1.0), kEquator);
  EXPECT_NEAR(g(0, 0), 0.8, 1e-15);
  EXPECT_NEAR(g(1, 1), -1.25, 1e-15);
  EXPECT_NEAR(g(2, 2), -100.0, 1e-12);
  EXPECT_NEAR(g(3, 3), -100.0, 1e-12);
  EXPECT_EQ((g - Matrix(g.diagonal().asDiagonal())).norm(), 0.0);
}

TEST(Metric, SchwarzschildDomainGuard) {
  const MetricField s = MetricField::schwarzschild(1.0);
  try {
    s.value(vec({0, 1.5, 1.0, 0}));
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("manifold domain"), std::string::npos);
  }
  EXPECT_THROW(s.value(vec({0, 2.0, 1.0, 0})), DomainError);
  EXPECT_THROW(s.value(vec({0, 10.0, 1.0})), DimensionMismatch);
}

TEST(Metric, CustomValueIsSymmetrized) {
  MetricField f(2, [](const Vector&) {
    Matrix g(2, 2);
    g << 1.0, 0.4, 0.0, -1.0;
    return g;
  });
  const Matrix g = f.value(Vector::Zero(2));
  EXPECT_DOUBLE_EQ(g(0, 1), 0.2);
  EXPECT_DOUBLE_EQ(g(1, 0), 0.2);
}

TEST(Metric, AnalyticPartialsMatchFiniteDifferences) {
  const MetricField s = MetricField::schwarzschild(1.0);
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const Vector x = sample_point(s, rng);
    const Rank3 a = s.partials(x);
    const Rank3 f = s.fd_partials(x);
    for (int l = 0; l < 4; ++l) {
      EXPECT_LE((a[l] - f[l]).norm(), 1e-6 * std::max(1.0, a[l].norm())) << "direction " << l;
    }
  }
}

TEST(Metric, InverseAndSingular) {
  const MetricField s = MetricField::schwarzschild(1.0);
  const Matrix gi = inverse_metric_at(s, kEquator);
  EXPECT_LE((gi * s.value(kEquator) - Matrix::Identity(4, 4)).norm(), 1e-14);
  EXPECT_THROW(invert_metric(vec({1, 0, -1}).asDiagonal().toDenseMatrix()), SingularMetric);
  EXPECT_THROW(invert_metric(vec({1, 1e-13}).asDiagonal().toDenseMatrix()), SingularMetric);
}

TEST(Christoffel, FlatIsZero) {
  for (const Rank3& c : {christoffel_at(MetricField::minkowski(4), vec({1, 2, 3, 4})),
                         christoffel_at(MetricField::diagonal({2, -1, -3}), vec({1, 2, 3}))}) {
    for (const Matrix& m : c) EXPECT_EQ(m.norm(), 0.0);
  }
}

TEST(Christoffel, SchwarzschildEquatorExample) {
  const Rank3 c = christoffel_at(MetricField::schwarzschild(1.0), kEquator);
  // {_t^r_t} stored as c[r](t, t)
  EXPECT_NEAR(c[1](0, 0), -0.008, 1e-15);
}

TEST(Christoffel, SchwarzschildMatchesTextbookWithOppositeSign) {
  const MetricField s = MetricField::schwarzschild(1.0);
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const Vector x = sample_point(s, rng);
    const Rank3 c = christoffel_at(s, x);
    const Rank3 ref = oracle::schwarzschild_gamma(1.0, x);
    for (int l = 0; l < 4; ++l) {
      EXPECT_LE((c[l] + ref[l]).norm(), 1e-12 * std::max(1.0, ref[l].norm()));
      EXPECT_EQ((c[l] - c[l].transpose()).norm(), 0.0);
    }
  }
}

TEST(Christoffel, FiniteDifferenceFallbackAgrees) {
  const MetricField s = MetricField::schwarzschild(2.0);
  MetricField numeric(4, [s](const Vector& x) { return s.value(x); });
  ASSERT_FALSE(numeric.has_analytic_partials());
  const Vector x = vec({0.3, 9.0, 1.1, 0.4});
  const Rank3 a = christoffel_at(s, x);
  const Rank3 f = christoffel_at(numeric, x);
  for (int l = 0; l < 4; ++l) EXPECT_LE((a[l] - f[l]).norm(), 1e-7 * std::max(1.0, a[l].norm()));
}

TEST(Potential, UniformFieldFaraday) {
  const PotentialField p = PotentialField::uniform_field({0.1, 0.2, 0.3}, {0.4, 0.5, 0.6});
  const Matrix F = faraday_at(p, vec({1, 2, 3, 4}));
  EXPECT_DOUBLE_EQ(F(1, 0), 0.1);
  EXPECT_DOUBLE_EQ(F(2, 0), 0.2);
  EXPECT_DOUBLE_EQ(F(3, 0), 0.3);
  EXPECT_DOUBLE_EQ(F(2, 3), 0.4);
  EXPECT_DOUBLE_EQ(F(3, 1), 0.5);
  EXPECT_DOUBLE_EQ(F(1, 2), 0.6);
  EXPECT_EQ((F + F.transpose()).norm(), 0.0);
}

TEST(Potential, CoulombPartials) {
  const PotentialField p = PotentialField::coulomb(2.0, {0.5, 0, 0});
  const Vector x = vec({0, 1.5, 1, -2});
  const Matrix d = p.partials(x);
  for (int l = 0; l < 4; ++l) {
    const double fd = oracle::fd4(
        [&](double s) {
          Vector y = x;
          y[l] += s;
          return p.value(y)[0];
        },
        0.0, 1e-3);
    EXPECT_NEAR(d(l, 0), fd, 1e-10);
  }
  EXPECT_THROW(p.value(vec({0, 0.5, 0, 0})), DomainError);
}

TEST(GTensor, MetricPowerContraction) {
  const MetricField s = MetricField::schwarzschild(1.0);
  const GTensorField g1 = GTensorField::from_metric(s);
  const GTensorField g2 = GTensorField::metric_power(s, 2);
  const Vector u = vec({1.3, 0.2, 0.01, -0.02});
  const double q = u.dot(s.value(kEquator) * u);
  EXPECT_NEAR(g_value(g1, kEquator, u), q, 1e-14);
  EXPECT_NEAR(g_value(g2, kEquator, u), q * q, 1e-13);
  EXPECT_LE(g2.value(kEquator).asymmetry(), 1e-15);
}

TEST(GTensor, MetricPowerPartialsMatchFiniteDifferences) {
  const MetricField s = MetricField::schwarzschild(1.0);
  const GTensorField g2 = GTensorField::metric_power(s, 2);
  const Vector u = vec({1.1, -0.1, 0.02, 0.03});
  const Vector x = vec({0.0, 7.0, 1.2, 0.5});
  const auto d = g2.partials(x);
  for (int l = 0; l < 4; ++l) {
    const double fd = oracle::fd4(
        [&](double h) {
          Vector y = x;
          y[l] += h;
          return g_value(g2, y, u);
        },
        0.0, 1e-3);
    EXPECT_NEAR(d[l].full(u), fd, 1e-8 * std::max(1.0, std::abs(fd)));
  }
}

TEST(GTensor, UnsupportedOrder) {
  EXPECT_THROW(GTensorField::metric_power(MetricField::minkowski(4), 3), Unsupported);
}
