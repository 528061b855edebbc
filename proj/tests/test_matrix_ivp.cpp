#include "pathframes/errors.hpp"
#include "pathframes/matrix_ivp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace pathframes {
namespace {

CoefficientMap constant_map(Matrix z) {
  return [z](double) { return z; };
}

Matrix rotation(double s) {
  Matrix r(2, 2);
  r << std::cos(s), -std::sin(s), std::sin(s), std::cos(s);
  return r;
}

Matrix skew() {
  Matrix z(2, 2);
  z << 0.0, -1.0, 1.0, 0.0;
  return z;
}

// Smooth non-commuting coefficient for the group and Liouville checks.
CoefficientMap wobbly() {
  return [](double s) {
    Matrix z(2, 2);
    z << 0.3 * std::sin(s), 1.0 + 0.2 * s, -0.7, 0.1 * std::cos(2 * s);
    return z;
  };
}

TEST(MatrixIvpTest, ZeroCoefficientGivesIdentity) {
  const auto sol = solve_matrix_ivp(constant_map(Matrix::Zero(3, 3)), 0.0, uniform_grid(-1, 1, 21));
  for (const auto& y : sol.values()) EXPECT_EQ((y - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(MatrixIvpTest, ScalarExponential) {
  const auto sol = solve_matrix_ivp(constant_map(Matrix::Identity(2, 2)), 0.0, uniform_grid(0, 1, 1001),
                                    IvpOptions{0.0});
  EXPECT_LT((sol.at(1.0) - std::exp(1.0) * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(MatrixIvpTest, SkewGeneratorIsRotation) {
  const auto sol = solve_matrix_ivp(constant_map(skew()), 0.0, uniform_grid(0, 2 * M_PI, 101));
  for (std::size_t k = 0; k < sol.grid().size(); ++k)
    EXPECT_LT((sol.at_node(k) - rotation(sol.grid()[k])).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(MatrixIvpTest, FourthOrderConvergence) {
  double previous = 0.0;
  for (int steps : {10, 20, 40, 80}) {
    const auto sol = solve_matrix_ivp(constant_map(skew()), 0.0, uniform_grid(0, 2.0, steps + 1),
                                      IvpOptions{0.0});
    double err = 0.0;
    for (std::size_t k = 0; k < sol.grid().size(); ++k)
      err = std::max(err, (sol.at_node(k) - rotation(sol.grid()[k])).cwiseAbs().maxCoeff());
    if (previous > 0.0) {
      EXPECT_GE(previous / err, 12.0) << steps;
      EXPECT_LE(previous / err, 20.0) << steps;
    }
    previous = err;
  }
}

TEST(MatrixIvpTest, InitialValueIsExactIdentityForInteriorOrigin) {
  const auto sol = solve_matrix_ivp(wobbly(), 0.5, uniform_grid(0, 1, 11));
  EXPECT_EQ(sol.origin(), 5u);
  EXPECT_EQ((sol.at_node(5) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(MatrixIvpTest, GroupProperty) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> pick(0, 40);
  const auto grid = uniform_grid(0.0, 2.0, 41);
  for (int trial = 0; trial < 20; ++trial) {
    int i[3] = {pick(rng), pick(rng), pick(rng)};
    std::sort(i, i + 3);
    const double s0 = grid[i[0]], s1 = grid[i[1]], s2 = grid[i[2]];
    const auto from0 = solve_matrix_ivp(wobbly(), s0, grid);
    const auto from1 = solve_matrix_ivp(wobbly(), s1, grid);
    const Matrix lhs = from0.at_node(i[2]);
    const Matrix rhs = from1.at_node(i[2]) * from0.at_node(i[1]);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-8) << s0 << " " << s1 << " " << s2;
  }
}

TEST(MatrixIvpTest, LiouvilleFormula) {
  const auto grid = uniform_grid(0.0, 2.0, 2001);
  const auto sol = solve_matrix_ivp(wobbly(), 0.0, grid);
  const double h = grid[1] - grid[0];
  for (std::size_t k = 1; k + 1 < grid.size(); k += 50) {
    const double d = (std::log(std::abs(sol.at_node(k + 1).determinant())) -
                      std::log(std::abs(sol.at_node(k - 1).determinant()))) / (2 * h);
    EXPECT_NEAR(d, wobbly()(grid[k]).trace(), 1e-6);
  }
}

TEST(MatrixIvpTest, BackwardConsistency) {
  const auto grid = uniform_grid(0.0, 1.5, 31);
  const auto forward = solve_matrix_ivp(wobbly(), 0.0, grid);
  const auto backward = solve_matrix_ivp(wobbly(), 1.5, grid);
  EXPECT_EQ((backward.at(1.5) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT((forward.at(1.5) * backward.at(0.0) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(MatrixIvpTest, EvaluateOffGrid) {
  const auto sol = solve_matrix_ivp(constant_map(skew()), 0.0, uniform_grid(0, 1, 11));
  EXPECT_LT((sol.evaluate(0.537) - rotation(0.537)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(sol.nearest_node(0.537), 5u);
}

TEST(MatrixIvpTest, Errors) {
  EXPECT_THROW(solve_matrix_ivp(constant_map(skew()), 0.55, uniform_grid(0, 1, 11)), ArgumentError);
  CoefficientMap bad = [](double s) {
    Matrix z = Matrix::Zero(2, 2);
    if (s > 0.5) z(0, 0) = std::nan("");
    return z;
  };
  EXPECT_THROW(solve_matrix_ivp(bad, 0.0, uniform_grid(0, 1, 11)), EvaluationError);
}

TEST(MatrixIvpTest, InterpolatedCoefficient) {
  const auto table = uniform_grid(0, 1, 201);
  std::vector<Matrix> samples;
  for (double s : table) samples.push_back(s * skew());
  const auto z = interpolate_coefficient(table, samples);
  EXPECT_LT((z(0.3333) - 0.3333 * skew()).cwiseAbs().maxCoeff(), 1e-14);
  // dY/ds = s J Y integrates to rotation by s^2 / 2.
  const auto sol = solve_matrix_ivp(z, 0.0, uniform_grid(0, 1, 11));
  EXPECT_LT((sol.at(1.0) - rotation(0.5)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(GridHelpersTest, DensityAndIndex) {
  const auto g = grid_for_density(0.0, 2.0, 100.0);
  EXPECT_EQ(g.size(), 201u);
  EXPECT_EQ(grid_index(g, 1.0), 100u);
  EXPECT_THROW(grid_index(g, 1.005), ArgumentError);
}

}  // namespace
}  // namespace pathframes
