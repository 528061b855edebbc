#include "pathframes/errors.hpp"
#include "pathframes/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

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

TEST(ChartDomainTest, RejectsEmptyBoxes) {
  EXPECT_THROW(ChartDomain(v2(0, 0), v2(1, 0)), ArgumentError);
  EXPECT_THROW(ChartDomain(Vector(0), Vector(0)), ArgumentError);
  EXPECT_THROW(ChartDomain(v2(0, 0), Vector::Ones(3)), ArgumentError);
}

TEST(ChartDomainTest, ContainmentAndErrors) {
  const auto chart = box(-1, 1);
  EXPECT_TRUE(chart.contains(v2(0.5, -1.0)));
  EXPECT_FALSE(chart.contains(v2(1.5, 0.0)));
  EXPECT_THROW(chart.require_inside(v2(1.5, 0.0)), DomainError);
  EXPECT_THROW(chart.require_inside(Vector::Zero(3)), DomainError);
}

TEST(FiniteDifferenceTest, ConstantHasZeroPartials) {
  const auto chart = box(-5, 5);
  Matrix c(2, 2);
  c << 1, 2, 3, 4;
  const auto d = finite_difference_jacobian([c](const Vector&) -> Matrix { return c; }, chart,
                                            v2(0.3, -0.2), 1e-5);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(d[1].cwiseAbs().maxCoeff(), 0.0);
}

TEST(FiniteDifferenceTest, LinearFunctionIsExact) {
  const auto chart = box(-5, 5);
  const auto d = finite_difference_jacobian(
      [](const Vector& x) -> Matrix { return x[0] * Matrix::Identity(2, 2); }, chart,
      v2(0.3, 0.7), 1e-5);
  EXPECT_LT((d[0] - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_EQ(d[1].cwiseAbs().maxCoeff(), 0.0);
}

TEST(FiniteDifferenceTest, QuadraticAgainstAnalyticDerivative) {
  // d/dx1 (x1^2 I) = 2 x1 I = I at x1 = 0.5.
  const auto chart = box(-5, 5);
  const double h = 1e-3;
  const auto d = finite_difference_jacobian(
      [](const Vector& x) -> Matrix { return x[0] * x[0] * Matrix::Identity(2, 2); }, chart,
      v2(0.5, 0.1), h);
  EXPECT_LT((d[0] - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 10 * h * h);
}

TEST(FiniteDifferenceTest, SecondOrderConvergence) {
  const auto chart = box(-5, 5);
  const Vector x = v2(0.4, -0.3);
  auto f = [](const Vector& p) -> Matrix {
    Matrix m(2, 2);
    m << std::sin(p[0]) * std::cos(p[1]), std::exp(p[0] * p[1]), p[1] * p[1] * p[1], std::cos(2 * p[0]);
    return m;
  };
  auto exact = [](const Vector& p) {
    Matrix d0(2, 2), d1(2, 2);
    d0 << std::cos(p[0]) * std::cos(p[1]), p[1] * std::exp(p[0] * p[1]), 0, -2 * std::sin(2 * p[0]);
    d1 << -std::sin(p[0]) * std::sin(p[1]), p[0] * std::exp(p[0] * p[1]), 3 * p[1] * p[1], 0;
    return std::vector<Matrix>{d0, d1};
  };
  const auto ref = exact(x);
  double previous = 0.0;
  for (double h : {4e-2, 2e-2, 1e-2}) {
    const auto d = finite_difference_jacobian(f, chart, x, h);
    const double err = std::max((d[0] - ref[0]).cwiseAbs().maxCoeff(),
                                (d[1] - ref[1]).cwiseAbs().maxCoeff());
    if (previous > 0.0) EXPECT_GE(previous / err, 3.5) << "h = " << h;
    previous = err;
  }
}

TEST(FiniteDifferenceTest, StencilLeavingChartIsDomainError) {
  const auto chart = box(0, 1);
  auto f = [](const Vector& x) -> Matrix { return x; };
  EXPECT_THROW(finite_difference_jacobian(f, chart, v2(0.0, 0.5), 1e-5), DomainError);
  EXPECT_THROW(finite_difference_jacobian(f, chart, v2(0.5, 0.5), 0.0), ArgumentError);
  EXPECT_THROW(finite_difference_jacobian(f, chart, v2(0.5, 0.5), -1e-3), ArgumentError);
}

TEST(CommutationTest, CoordinateFrameCommutesEverywhere) {
  const auto chart = box(-3, 3, 3);
  const auto frame = FrameField::coordinate(3);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.9, 2.9);
  for (int trial = 0; trial < 100; ++trial) {
    Vector x(3);
    x << u(rng), u(rng), u(rng);
    EXPECT_LT(commutation_coefficients(frame, chart, x, default_step(x)).max_abs(), 1e-12);
  }
}

TEST(CommutationTest, ScaledSecondVector) {
  // E1 = d1, E2 = x1 d2: [E1, E2] = d2 = (1/x1) E2.
  const auto chart = box(-5, 5);
  const FrameField frame([](const Vector& x) -> Matrix {
    Matrix a = Matrix::Identity(2, 2);
    a(1, 1) = x[0];
    return a;
  });
  const Vector x = v2(2.0, 0.0);
  const Tensor3 c = commutation_coefficients(frame, chart, x, 1e-5);

  // Oracle: bracket of the two vector fields by direct differentiation.
  const double h = 1e-5;
  auto e1 = [](const Vector&) { return v2(1.0, 0.0); };
  auto e2 = [](const Vector& p) { return v2(0.0, p[0]); };
  Vector bracket = Vector::Zero(2);
  for (int m = 0; m < 2; ++m) {
    Vector p = x, q = x;
    p[m] += h;
    q[m] -= h;
    bracket += e1(x)[m] * (e2(p) - e2(q)) / (2 * h) - e2(x)[m] * (e1(p) - e1(q)) / (2 * h);
  }
  EXPECT_NEAR(bracket[1] / x[0], 0.5, 1e-10);
  EXPECT_NEAR(c(1, 0, 1), 0.5, 1e-9);
  EXPECT_NEAR(c(0, 0, 1), 0.0, 1e-12);
}

TEST(CommutationTest, AntisymmetryIsExact) {
  const auto chart = box(-3, 3, 3);
  const FrameField frame([](const Vector& x) -> Matrix {
    Matrix a(3, 3);
    a << 2 + std::sin(x[1]), x[0] * x[2], 0.1, std::cos(x[0]), 3.0, x[1], x[2] * x[2], 0.2, 1.5 + x[0];
    return a;
  });
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(3);
    x << u(rng), u(rng), u(rng);
    const Tensor3 c = commutation_coefficients(frame, chart, x, 1e-5);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) EXPECT_EQ(c(i, j, k), -c(i, k, j));
  }
}

TEST(CommutationTest, SingularFrameIsDegeneracyError) {
  const auto chart = box(-5, 5);
  const FrameField frame([](const Vector&) -> Matrix { return Matrix::Zero(2, 2); });
  EXPECT_THROW(commutation_coefficients(frame, chart, v2(0, 0), 1e-5), DegeneracyError);
}

TEST(PathCurveTest, TangentMatchesCentralDifference) {
  const auto circle = PathCurve::circle(v2(0.5, -0.5), 2.0, 0.0, 6.0, 101);
  EXPECT_LT(circle.tangent_consistency(1e-4), 1e-7);
  const auto line = PathCurve::line(v2(0, 0), v2(1, 2), 0.0, 3.0, 11);
  EXPECT_LT(line.tangent_consistency(1e-4), 1e-10);
  EXPECT_NEAR(line.point(3.0)[1], 2.0, 1e-15);
}

TEST(PathCurveTest, GridAndValidation) {
  EXPECT_THROW(PathCurve::line(v2(0, 0), v2(1, 1), 1.0, 1.0, 10), ArgumentError);
  EXPECT_THROW(PathCurve::line(v2(0, 0), v2(1, 1), 0.0, 1.0, 1), ArgumentError);
  const auto path = PathCurve::coordinate_line(v2(0.5, 0.0), 1, 0.0, 2.0, 5);
  const auto g = path.grid();
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g[2], 1.0);
  EXPECT_EQ(g.back(), 2.0);
  EXPECT_NO_THROW(path.require_inside(box(-3, 3)));
  EXPECT_THROW(path.require_inside(box(-1, 1)), DomainError);
}

}  // namespace
}  // namespace pathframes
