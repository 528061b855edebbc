#include "pathframes/errors.hpp"
#include "pathframes/tube.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace pathframes {
namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

ChartDomain box(double lo, double hi, int n = 2) {
  return ChartDomain(Vector::Constant(n, lo), Vector::Constant(n, hi));
}

TEST(TubeMapTest, PassesThroughPathAtT0) {
  const auto path = PathCurve::circle(v2(0, 0), 1.0, 0.0, 1.5 * M_PI, 201);
  const auto tube = TubeMap::adapted(path, box(-5, 5), 0.05);
  for (double s : path.grid()) EXPECT_EQ((tube.eta(s, tube.t0()) - path.point(s)).norm(), 0.0);
}

TEST(TubeMapTest, TransverseBasisIsOrthonormalComplement) {
  const auto path = PathCurve::circle(v2(0, 0), 2.0, 0.0, 3.0, 101);
  const auto tube = TubeMap::adapted(path, box(-5, 5), 0.1);
  for (double s : {0.0, 1.0, 2.9}) {
    const Matrix n = tube.transverse_basis(s);
    ASSERT_EQ(n.cols(), 1);
    EXPECT_NEAR(n.col(0).norm(), 1.0, 1e-14);
    EXPECT_NEAR(n.col(0).dot(path.tangent(s)), 0.0, 1e-14);
  }
}

TEST(TubeMapTest, ThreeDimensionalBasis) {
  Vector a = Vector::Zero(3), b(3);
  b << 1.0, 2.0, 0.5;
  const auto path = PathCurve::line(a, b, 0.0, 1.0, 51);
  const auto tube = TubeMap::adapted(path, box(-5, 5, 3), 0.1);
  const Matrix n = tube.transverse_basis(0.5);
  ASSERT_EQ(n.cols(), 2);
  EXPECT_LT((n.transpose() * n - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((n.transpose() * path.tangent(0.5)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(TubeMapTest, LocateInvertsEta) {
  const auto path = PathCurve::circle(v2(0.5, 0.0), 1.0, 0.2, 2.2, 201);
  const auto tube = TubeMap::adapted(path, box(-5, 5), 0.1);
  for (double s : {0.2, 0.9, 1.7, 2.2})
    for (double t : {-0.08, 0.0, 0.05}) {
      const auto loc = tube.locate(tube.eta(s, Vector::Constant(1, t)));
      EXPECT_NEAR(loc.s, s, 1e-10);
      EXPECT_NEAR(loc.t[0], t, 1e-10);
    }
  EXPECT_THROW(tube.locate(v2(3.0, 3.0)), DomainError);
}

TEST(TubeMapTest, EtaSMatchesDifferenceQuotient) {
  const auto path = PathCurve::circle(v2(0, 0), 1.0, 0.0, 2.0, 101);
  const auto tube = TubeMap::adapted(path, box(-5, 5), 0.1);
  const Vector t = Vector::Constant(1, 0.05);
  const double h = 1e-5;
  const Vector fd = (tube.eta(1.0 + h, t) - tube.eta(1.0 - h, t)) / (2 * h);
  EXPECT_LT((tube.eta_s(1.0, t) - fd).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(TubeMapTest, ClosedLoopIsRejected) {
  const auto loop = PathCurve::circle(v2(0, 0), 1.0, 0.0, 2.0 * M_PI, 401);
  EXPECT_THROW(TubeMap::adapted(loop, box(-5, 5), 0.05), GeometryError);
}

TEST(TubeMapTest, OversizedRadiusIsRejected) {
  // Radius beyond the curvature radius folds the tube onto itself.
  const auto arc = PathCurve::circle(v2(0, 0), 1.0, 0.0, 2.0, 201);
  EXPECT_THROW(TubeMap::adapted(arc, box(-5, 5), 1.5), GeometryError);
}

TEST(TubeMapTest, LeavingChartIsDomainError) {
  const auto line = PathCurve::line(v2(0, 0), v2(1, 0), 0.0, 1.0, 11);
  EXPECT_THROW(TubeMap::adapted(line, box(-0.05, 2), 0.1), DomainError);
}

TEST(TubeMapTest, DefaultRadiusUsesBoundingBox) {
  const auto loop = PathCurve::circle(v2(0, 0), 2.0, 0.0, 2.0 * M_PI, 401);
  EXPECT_NEAR(TubeMap::default_radius(loop), 0.2, 1e-6);
  const auto line = PathCurve::line(v2(0, 0), v2(1, 0.5), 0.0, 1.0, 11);
  EXPECT_NEAR(TubeMap::default_radius(line), 0.05, 1e-15);
}

TEST(TubeMapTest, InjectivityReport) {
  const auto arc = PathCurve::circle(v2(0, 0), 1.0, 0.0, 1.5 * M_PI, 201);
  const auto tube = TubeMap::adapted(arc, box(-5, 5), 0.05);
  const auto report = tube.check_injectivity(box(-5, 5));
  EXPECT_TRUE(report.injective);
  EXPECT_GT(report.samples, 0u);
  EXPECT_GT(report.min_det_ratio, 0.9);
}

}  // namespace
}  // namespace pathframes
