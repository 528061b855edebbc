#include "pathframes/errors.hpp"
#include "pathframes/grid_calculus.hpp"
#include "pathframes/matrix_ivp.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace pathframes {
namespace {

TEST(GridCalculusTest, SpacingRequiresUniformGrid) {
  EXPECT_DOUBLE_EQ(uniform_spacing(uniform_grid(0, 1, 11)), 0.1);
  EXPECT_THROW(uniform_spacing({0.0, 0.1, 0.3}), ArgumentError);
}

TEST(GridCalculusTest, DerivativeIsFourthOrderIncludingEnds) {
  double previous = 0.0;
  for (int nodes : {21, 41, 81}) {
    const auto grid = uniform_grid(0.0, 1.0, static_cast<std::size_t>(nodes));
    std::vector<Vector> v;
    for (double s : grid) v.push_back(Vector::Constant(1, std::sin(3 * s)));
    const auto d = grid_derivative(v, grid[1] - grid[0]);
    double err = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) err = std::max(err, std::abs(d[k][0] - 3 * std::cos(3 * grid[k])));
    if (previous > 0.0) EXPECT_GT(previous / err, 12.0);
    previous = err;
  }
}

TEST(GridCalculusTest, QuarticIsDifferentiatedExactly) {
  const auto grid = uniform_grid(-1.0, 1.0, 9);
  std::vector<Matrix> v;
  for (double s : grid) v.push_back(Matrix::Constant(1, 1, s * s * s * s - s));
  const auto d = grid_derivative(v, grid[1] - grid[0]);
  for (std::size_t k = 0; k < grid.size(); ++k)
    EXPECT_NEAR(d[k](0, 0), 4 * std::pow(grid[k], 3) - 1, 1e-12);
  EXPECT_THROW(grid_derivative(std::vector<Matrix>(4, Matrix::Zero(1, 1)), 0.1), ArgumentError);
}

TEST(GridCalculusTest, CumulativeSimpsonIsExactForQuadratics) {
  for (int nodes : {11, 12}) {
    const auto grid = uniform_grid(0.0, 1.0, static_cast<std::size_t>(nodes));
    std::vector<Vector> v;
    for (double s : grid) v.push_back(Vector::Constant(1, s * s - 2 * s));
    const auto integral = cumulative_simpson(v, grid[1] - grid[0]);
    EXPECT_EQ(integral[0][0], 0.0);
    for (std::size_t k = 0; k < grid.size(); ++k)
      EXPECT_NEAR(integral[k][0], std::pow(grid[k], 3) / 3 - grid[k] * grid[k], 1e-13) << k;
  }
}

TEST(GridCalculusTest, CumulativeSimpsonConvergesAtOddNodes) {
  double previous = 0.0;
  for (int nodes : {12, 24, 48}) {
    const auto grid = uniform_grid(0.0, 1.0, static_cast<std::size_t>(nodes));
    std::vector<Vector> v;
    for (double s : grid) v.push_back(Vector::Constant(1, std::exp(s)));
    const auto integral = cumulative_simpson(v, grid[1] - grid[0]);
    double err = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
      err = std::max(err, std::abs(integral[k][0] - (std::exp(grid[k]) - 1.0)));
    if (previous > 0.0) EXPECT_GT(previous / err, 12.0);
    previous = err;
  }
}

}  // namespace
}  // namespace pathframes
