#pragma once

#include "pathframes/derivations.hpp"
#include "pathframes/special_frames.hpp"
#include "pathframes/tube.hpp"

#include <memory>

namespace pathframes {

/// Local coordinates x' on a tube whose coordinate basis reproduces a given
/// frame on the path:
///
///   x'(eta(s, t)) = x0 + int_{s0}^{s} A^{-1}(u) gamma_dot(u) du
///                      + A^{-1}(s) [eta(s, t) - gamma(s)],
///
/// so that dx'/dx = A^{-1}(s) on gamma. The quadratic remainder terms that
/// the general construction admits are taken to be zero.
class CoordinateExtension {
 public:
  const TubeMap& tube() const { return data_->tube; }
  double s0() const { return data_->s0; }
  const Vector& x0() const { return data_->x0; }

  Vector x_prime(double s, const Vector& t) const;
  Vector x_prime_at(const Vector& x) const;

  /// d x' / d x at a chart point, by central differences with step h.
  Matrix jacobian(const Vector& x, double h) const;

  /// Frame of coordinate vectors d/dx'^j: columns of (dx'/dx)^{-1}.
  FrameField induced_frame(double h) const;

  /// Max over grid of |dx'/dx - A^{-1}|_inf on the path.
  double jacobian_mismatch() const { return data_->jacobian_mismatch; }
  /// Max over grid of |(dx'/dx)^{-1} - A|_inf on the path.
  double basis_mismatch() const { return data_->basis_mismatch; }
  /// Range of det(dx'/dx) over the sampled tube relative to the on-path
  /// value at the same s.
  double min_det_ratio() const { return data_->min_det_ratio; }
  double max_det_ratio() const { return data_->max_det_ratio; }
  /// Smallest |det(dx'/dx)| seen on the sampled tube.
  double min_abs_det() const { return data_->min_abs_det; }

 private:
  struct Data {
    TubeMap tube;
    ChartDomain chart;
    std::function<Matrix(double)> frame;
    std::vector<double> grid;
    std::vector<Vector> integral;  // int_{grid[0]}^{grid[k]} A^{-1} gamma_dot
    double s0 = 0.0;
    Vector x0;
    Vector integral_at_s0;
    double jacobian_mismatch = 0.0;
    double basis_mismatch = 0.0;
    double min_det_ratio = 0.0;
    double max_det_ratio = 0.0;
    double min_abs_det = 0.0;
  };
  explicit CoordinateExtension(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  Vector integral_to(double s) const;
  friend CoordinateExtension extend_to_coordinates(std::function<Matrix(double)>, const TubeMap&,
                                                   const ChartDomain&, double, const Vector&,
                                                   const std::vector<double>&, double);

  std::shared_ptr<const Data> data_;
};

/// Builds x' for a continuous path frame A(s) (columns = frame vectors in
/// chart coordinates). The integral uses Simpson's rule on the uniform grid.
/// Verification data is computed with step h (h <= 0 selects 1e-5).
/// Throws DegeneracyError if A is singular at a grid node.
CoordinateExtension extend_to_coordinates(std::function<Matrix(double)> frame_on_path,
                                          const TubeMap& tube, const ChartDomain& chart,
                                          double s0, const Vector& x0,
                                          const std::vector<double>& grid, double h = 0.0);

enum class HolonomyVerdict { Holonomic, Anholonomic, Inconclusive };

const char* to_string(HolonomyVerdict v);

struct HolonomyReport {
  HolonomyVerdict verdict = HolonomyVerdict::Inconclusive;
  double max_commutator = 0.0;      // max_s max_{i,j,k} |C^i_{jk}|
  std::vector<double> per_node;
};

struct HolonomyTolerance {
  double holonomic = 1e-5;
  /// Commutators must exceed factor * holonomic to call a frame anholonomic.
  double anholonomic_factor = 10.0;
};

/// Commutation coefficients of the frame on every grid node of the path.
HolonomyReport holonomicity_on_path(const FrameField& frame, const PathCurve& path,
                                    const ChartDomain& chart, const std::vector<double>& grid,
                                    double h, const HolonomyTolerance& tolerance = {});

struct TorsionReport {
  bool torsion_free = false;
  /// max_s sum_{i,k,l} |T^i_{kl}|
  double max_norm = 0.0;
  std::vector<double> per_node;
};

TorsionReport torsion_free_on_path(const ConnectionField& conn, const FrameField& frame,
                                   const PathCurve& path, const ChartDomain& chart,
                                   const std::vector<double>& grid, double tolerance = 1e-6,
                                   double h = 0.0);

}  // namespace pathframes
