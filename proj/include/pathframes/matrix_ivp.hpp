#pragma once

#include "pathframes/types.hpp"

#include <vector>

namespace pathframes {

using CoefficientMap = std::function<Matrix(double)>;

struct IvpOptions {
  /// RK4 substeps per unit of parameter between consecutive grid nodes
  /// (at least one substep per interval). Zero means one step per interval.
  double steps_per_unit = 2000.0;
};

/// Fundamental solution Y(s, s0; Z) of dY/ds = Z(s) Y, Y(s0) = I on a grid.
class FundamentalSolution {
 public:
  FundamentalSolution(double s0, std::size_t origin, std::vector<double> grid,
                      std::vector<Matrix> values, CoefficientMap z, IvpOptions options);

  double s0() const { return s0_; }
  /// Index of s0 in the grid.
  std::size_t origin() const { return origin_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<Matrix>& values() const { return values_; }
  const CoefficientMap& coefficient() const { return z_; }

  const Matrix& at_node(std::size_t k) const { return values_.at(k); }

  /// Value at the grid node nearest to s.
  const Matrix& at(double s) const;
  std::size_t nearest_node(double s) const;

  /// Value at arbitrary s, integrated from the nearest node with the same
  /// step control as the original march.
  Matrix evaluate(double s) const;

 private:
  double s0_;
  std::size_t origin_;
  std::vector<double> grid_;
  std::vector<Matrix> values_;
  CoefficientMap z_;
  IvpOptions options_;
};

/// Classical RK4 marched forward and backward from s0; the grid must be
/// ascending and contain s0. Y(s0) is the identity exactly.
FundamentalSolution solve_matrix_ivp(const CoefficientMap& z, double s0,
                                     const std::vector<double>& grid,
                                     const IvpOptions& options = {});

/// Propagates y from s_from to s_to with `steps` equal RK4 steps.
Matrix rk4_propagate(const CoefficientMap& z, const Matrix& y, double s_from, double s_to,
                     int steps);

/// Uniform grid with `nodes` nodes on [a, b].
std::vector<double> uniform_grid(double a, double b, std::size_t nodes);

/// Uniform grid with spacing close to 1 / steps_per_unit (at least 2 nodes).
std::vector<double> grid_for_density(double a, double b, double steps_per_unit);

/// Index of s in the grid (relative tolerance 1e-12); throws ArgumentError if absent.
std::size_t grid_index(const std::vector<double>& grid, double s);

/// Wraps tabulated samples of Z as a piecewise-linear function of s.
/// Accuracy of the resulting solution is capped at O(h^2) in the table spacing.
CoefficientMap interpolate_coefficient(std::vector<double> grid, std::vector<Matrix> samples);

}  // namespace pathframes
