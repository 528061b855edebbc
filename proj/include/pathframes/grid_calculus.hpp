#pragma once

#include "pathframes/types.hpp"

#include <vector>

namespace pathframes {

/// Spacing of a uniform grid; throws ArgumentError if the grid is not uniform.
double uniform_spacing(const std::vector<double>& grid);

/// Fourth-order finite-difference derivative of samples on a uniform grid
/// (five-point stencils, one-sided at the ends). Needs at least 5 samples.
std::vector<Matrix> grid_derivative(const std::vector<Matrix>& values, double h);
std::vector<Vector> grid_derivative(const std::vector<Vector>& values, double h);

/// Running integral from grid[0] by composite Simpson, with a fourth-order
/// three-point rule for odd nodes. Needs at least 3 samples.
std::vector<Vector> cumulative_simpson(const std::vector<Vector>& values, double h);

}  // namespace pathframes
