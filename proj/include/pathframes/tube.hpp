#pragma once

#include "pathframes/geometry.hpp"

#include <memory>

namespace pathframes {

/// Tube around a path: eta(s, t) = gamma(s) + N(s) (t - t0).
///
/// N(s) is an orthonormal (in chart coordinates) complement of the tangent.
/// In two dimensions it is the tangent rotated by +90 degrees; in higher
/// dimensions it is the complement of gamma_dot(s_start) projected off the
/// current tangent and re-orthonormalized. eta(s, t0) == gamma(s) holds
/// exactly and the adapted coordinates (s, t) identify the tube with
/// J x V.
class TubeMap {
 public:
  struct Location {
    double s = 0.0;
    Vector t;
  };

  struct InjectivityReport {
    bool injective = true;
    double min_separation = 0.0;     // smallest distance between non-adjacent samples
    double separation_tolerance = 0.0;
    double min_det_ratio = 0.0;      // det[d eta/ds, N] off path / on path
    std::size_t samples = 0;
  };

  /// Builds and validates the tube; throws GeometryError if it is not
  /// injective on its samples, DomainError if it leaves the chart.
  static TubeMap adapted(const PathCurve& path, const ChartDomain& chart, double radius);
  static TubeMap adapted(const PathCurve& path, const ChartDomain& chart, double radius,
                         const Vector& t0);

  /// 5% of the largest side of the path's coordinate bounding box.
  static double default_radius(const PathCurve& path);

  Vector eta(double s, const Vector& t) const;
  /// n x (n-1) matrix whose columns are the transverse directions at s.
  Matrix transverse_basis(double s) const;
  /// d eta / ds at (s, t).
  Vector eta_s(double s, const Vector& t) const;

  /// Inverts eta by Newton iteration seeded from the nearest path sample.
  /// Throws DomainError when x is not in the tube.
  Location locate(const Vector& x) const;

  InjectivityReport check_injectivity(const ChartDomain& chart) const;

  const PathCurve& path() const;
  const Vector& t0() const;
  double radius() const;
  int dim() const;

 private:
  struct Data;
  explicit TubeMap(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

}  // namespace pathframes
