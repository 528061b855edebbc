#pragma once

#include "pathframes/types.hpp"

#include <string>
#include <vector>

namespace pathframes {

/// A single coordinate chart: dimension n and the box lower <= x <= upper.
class ChartDomain {
 public:
  ChartDomain(Vector lower, Vector upper);

  int dim() const { return static_cast<int>(lower_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  bool contains(const Vector& x) const;

  /// Throws DomainError when x has the wrong length or leaves the box.
  void require_inside(const Vector& x, const char* what = "point") const;

 private:
  Vector lower_;
  Vector upper_;
};

/// Default finite-difference step 1e-5 * max(1, |x|_inf).
double default_step(const Vector& x);

/// C^1 path s -> gamma(s) on [s_start, s_end] with its tangent.
class PathCurve {
 public:
  using PointMap = std::function<Vector(double)>;

  PathCurve(double s_start, double s_end, PointMap gamma, PointMap gamma_dot, int grid_size);

  double s_start() const { return s_start_; }
  double s_end() const { return s_end_; }
  int grid_size() const { return grid_size_; }
  int dim() const;

  Vector point(double s) const;
  Vector tangent(double s) const;

  /// Uniform grid of grid_size nodes spanning [s_start, s_end].
  std::vector<double> grid() const;

  PathCurve with_grid_size(int grid_size) const;

  /// Throws DomainError if a grid point leaves the chart.
  void require_inside(const ChartDomain& chart) const;

  /// Max |gamma_dot - central difference of gamma| over the grid (step h).
  double tangent_consistency(double h) const;

  static PathCurve line(const Vector& from, const Vector& to, double s_start, double s_end,
                        int grid_size);
  /// center + radius * (cos s, sin s) in the first two coordinates.
  static PathCurve circle(const Vector& center, double radius, double s_start, double s_end,
                          int grid_size);
  /// base + s * e_axis.
  static PathCurve coordinate_line(const Vector& base, int axis, double s_start, double s_end,
                                   int grid_size);

 private:
  double s_start_;
  double s_end_;
  PointMap gamma_;
  PointMap gamma_dot_;
  int grid_size_;
};

/// Frame field: point -> invertible matrix A whose column j holds the
/// coordinate components A^i_j of the frame vector E_j.
class FrameField {
 public:
  explicit FrameField(MatrixField map);

  /// Evaluates A(x); throws DegeneracyError if A(x) is singular.
  Matrix operator()(const Vector& x) const;

  static FrameField coordinate(int n);

 private:
  MatrixField map_;
};

/// Throws DegeneracyError unless m is numerically invertible.
void require_invertible(const Matrix& m, const char* what);

/// Central differences (f(x + h e_k) - f(x - h e_k)) / 2h for every k.
std::vector<Matrix> finite_difference_jacobian(const MatrixField& f, const ChartDomain& chart,
                                               const Vector& x, double h);

/// Jacobian of a vector map: column k holds the partial derivative along x^k.
Matrix finite_difference_vector_jacobian(const VectorField& f, const ChartDomain& chart,
                                         const Vector& x, double h);

/// C^i_{jk} with [E_j, E_k] = C^i_{jk} E_i, frame partials by central differences.
Tensor3 commutation_coefficients(const FrameField& frame, const ChartDomain& chart,
                                 const Vector& x, double h);

}  // namespace pathframes
