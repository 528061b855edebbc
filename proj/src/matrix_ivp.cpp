#include "pathframes/matrix_ivp.hpp"

#include "pathframes/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pathframes {

namespace {

Matrix sample(const CoefficientMap& z, double s, Eigen::Index n) {
  Matrix m = z(s);
  if (m.rows() != n || m.cols() != n) throw ArgumentError("coefficient matrix has the wrong size");
  if (!m.allFinite()) {
    std::ostringstream os;
    os << "coefficient matrix is not finite at s = " << s;
    throw EvaluationError(os.str());
  }
  return m;
}

int substeps(double ds, const IvpOptions& options) {
  if (options.steps_per_unit <= 0.0) return 1;
  return std::max(1, static_cast<int>(std::ceil(std::abs(ds) * options.steps_per_unit - 1e-9)));
}

}  // namespace

Matrix rk4_propagate(const CoefficientMap& z, const Matrix& y, double s_from, double s_to,
                     int steps) {
  const double h = (s_to - s_from) / steps;
  const Eigen::Index n = y.rows();
  Matrix cur = y;
  for (int i = 0; i < steps; ++i) {
    const double s = s_from + i * h;
    const Matrix k1 = sample(z, s, n) * cur;
    const Matrix zmid = sample(z, s + 0.5 * h, n);
    const Matrix k2 = zmid * (cur + 0.5 * h * k1);
    const Matrix k3 = zmid * (cur + 0.5 * h * k2);
    const Matrix k4 = sample(z, s + h, n) * (cur + h * k3);
    cur += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return cur;
}

std::vector<double> uniform_grid(double a, double b, std::size_t nodes) {
  if (nodes < 2) throw ArgumentError("grid needs at least 2 nodes");
  if (!(a < b)) throw ArgumentError("grid requires a < b");
  std::vector<double> g(nodes);
  const double h = (b - a) / static_cast<double>(nodes - 1);
  for (std::size_t k = 0; k < nodes; ++k) g[k] = a + static_cast<double>(k) * h;
  g.back() = b;
  return g;
}

std::vector<double> grid_for_density(double a, double b, double steps_per_unit) {
  if (!(steps_per_unit > 0.0)) throw ArgumentError("steps per unit must be positive");
  const auto steps = static_cast<std::size_t>(std::ceil((b - a) * steps_per_unit - 1e-9));
  return uniform_grid(a, b, std::max<std::size_t>(steps, 1) + 1);
}

std::size_t grid_index(const std::vector<double>& grid, double s) {
  const double tol = 1e-12 * std::max(1.0, std::abs(s));
  auto it = std::lower_bound(grid.begin(), grid.end(), s - tol);
  if (it == grid.end() || std::abs(*it - s) > tol) {
    std::ostringstream os;
    os << "parameter " << s << " is not a grid node";
    throw ArgumentError(os.str());
  }
  return static_cast<std::size_t>(it - grid.begin());
}

FundamentalSolution::FundamentalSolution(double s0, std::size_t origin, std::vector<double> grid,
                                         std::vector<Matrix> values, CoefficientMap z,
                                         IvpOptions options)
    : s0_(s0),
      origin_(origin),
      grid_(std::move(grid)),
      values_(std::move(values)),
      z_(std::move(z)),
      options_(options) {}

std::size_t FundamentalSolution::nearest_node(double s) const {
  auto it = std::lower_bound(grid_.begin(), grid_.end(), s);
  if (it == grid_.begin()) return 0;
  if (it == grid_.end()) return grid_.size() - 1;
  const auto hi = static_cast<std::size_t>(it - grid_.begin());
  return (s - grid_[hi - 1] <= grid_[hi] - s) ? hi - 1 : hi;
}

const Matrix& FundamentalSolution::at(double s) const { return values_[nearest_node(s)]; }

Matrix FundamentalSolution::evaluate(double s) const {
  const std::size_t k = nearest_node(s);
  const double ds = s - grid_[k];
  if (ds == 0.0) return values_[k];
  return rk4_propagate(z_, values_[k], grid_[k], s, substeps(ds, options_));
}

FundamentalSolution solve_matrix_ivp(const CoefficientMap& z, double s0,
                                     const std::vector<double>& grid, const IvpOptions& options) {
  if (grid.empty()) throw ArgumentError("grid is empty");
  if (!std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw ArgumentError("grid must be strictly ascending");
  const std::size_t origin = grid_index(grid, s0);

  const Eigen::Index n = z(grid[origin]).rows();
  std::vector<Matrix> values(grid.size());
  values[origin] = Matrix::Identity(n, n);
  for (std::size_t k = origin + 1; k < grid.size(); ++k)
    values[k] = rk4_propagate(z, values[k - 1], grid[k - 1], grid[k],
                              substeps(grid[k] - grid[k - 1], options));
  for (std::size_t k = origin; k-- > 0;)
    values[k] = rk4_propagate(z, values[k + 1], grid[k + 1], grid[k],
                              substeps(grid[k + 1] - grid[k], options));

  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!values[k].allFinite() || values[k].determinant() == 0.0) {
      std::ostringstream os;
      os << "fundamental solution degenerated at s = " << grid[k];
      throw EvaluationError(os.str());
    }
  }
  return FundamentalSolution(grid[origin], origin, grid, std::move(values), z, options);
}

CoefficientMap interpolate_coefficient(std::vector<double> grid, std::vector<Matrix> samples) {
  if (grid.size() != samples.size() || grid.size() < 2)
    throw ArgumentError("tabulated coefficient needs matching grid and samples");
  return [grid = std::move(grid), samples = std::move(samples)](double s) -> Matrix {
    auto it = std::upper_bound(grid.begin(), grid.end(), s);
    std::size_t hi = std::clamp<std::size_t>(static_cast<std::size_t>(it - grid.begin()), 1,
                                             grid.size() - 1);
    const double w = (s - grid[hi - 1]) / (grid[hi] - grid[hi - 1]);
    return (1.0 - w) * samples[hi - 1] + w * samples[hi];
  };
}

}  // namespace pathframes
