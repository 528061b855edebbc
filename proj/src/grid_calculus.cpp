#include "pathframes/grid_calculus.hpp"

#include "pathframes/errors.hpp"

#include <cmath>

namespace pathframes {

double uniform_spacing(const std::vector<double>& grid) {
  if (grid.size() < 2) throw ArgumentError("grid needs at least 2 nodes");
  const double h = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (std::abs((grid[k] - grid[k - 1]) - h) > 1e-9 * std::abs(h))
      throw ArgumentError("grid is not uniform");
  return h;
}

namespace {

template <typename T>
std::vector<T> derivative_impl(const std::vector<T>& f, double h) {
  const std::size_t n = f.size();
  if (n < 5) throw ArgumentError("fourth-order grid derivative needs at least 5 samples");
  std::vector<T> d(n);
  const double c = 1.0 / (12.0 * h);
  d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
  d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
  for (std::size_t k = 2; k + 2 < n; ++k)
    d[k] = c * (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]);
  d[n - 2] = c * (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]);
  d[n - 1] = c * (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
                  3.0 * f[n - 5]);
  return d;
}

}  // namespace

std::vector<Matrix> grid_derivative(const std::vector<Matrix>& values, double h) {
  return derivative_impl(values, h);
}

std::vector<Vector> grid_derivative(const std::vector<Vector>& values, double h) {
  return derivative_impl(values, h);
}

std::vector<Vector> cumulative_simpson(const std::vector<Vector>& f, double h) {
  const std::size_t n = f.size();
  if (n < 3) throw ArgumentError("Simpson integration needs at least 3 samples");
  std::vector<Vector> out(n);
  out[0] = Vector::Zero(f[0].size());
  out[1] = (h / 12.0) * (5.0 * f[0] + 8.0 * f[1] - f[2]);
  for (std::size_t k = 2; k < n; ++k) {
    if (k % 2 == 0)
      out[k] = out[k - 2] + (h / 3.0) * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
    else
      out[k] = out[k - 1] + (h / 12.0) * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
  }
  return out;
}

}  // namespace pathframes
