#pragma once

// Test-only oracles, coded independently of the library's implementation.

#include "pathframes/types.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace pathframes::testing {

/// Christoffel symbols of a metric by central differences:
/// Gamma^i_{jk} = 1/2 g^{il} (d_j g_{lk} + d_k g_{lj} - d_l g_{jk}).
inline double christoffel_from_metric(const std::function<Matrix(const Vector&)>& metric,
                                      const Vector& x, int i, int j, int k, double h = 1e-5) {
  const int n = static_cast<int>(x.size());
  std::vector<Matrix> dg;
  for (int m = 0; m < n; ++m) {
    Vector p = x, q = x;
    p[m] += h;
    q[m] -= h;
    dg.push_back((metric(p) - metric(q)) / (2 * h));
  }
  const Matrix ginv = metric(x).inverse();
  double sum = 0.0;
  for (int l = 0; l < n; ++l)
    sum += 0.5 * ginv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
  return sum;
}

inline Matrix sphere_metric(const Vector& x) {
  Matrix g = Matrix::Identity(2, 2);
  g(1, 1) = std::sin(x[0]) * std::sin(x[0]);
  return g;
}

inline Matrix polar_metric(const Vector& x) {
  Matrix g = Matrix::Identity(2, 2);
  g(1, 1) = x[0] * x[0];
  return g;
}

/// Along the latitude theta0 of the unit sphere with s = phi, the tangent
/// components are the constant matrix W = [[0, -sin cos], [cot, 0]] with
/// W^2 = -cos^2(theta0) I, so exp(-s W) = cos(c s) I - sin(c s)/c W,
/// c = cos(theta0).
inline Matrix latitude_components(double theta0) {
  Matrix w(2, 2);
  w << 0.0, -std::sin(theta0) * std::cos(theta0), std::cos(theta0) / std::sin(theta0), 0.0;
  return w;
}

inline Matrix latitude_transport_closed_form(double theta0, double s) {
  const double c = std::cos(theta0);
  return std::cos(c * s) * Matrix::Identity(2, 2) - (std::sin(c * s) / c) * latitude_components(theta0);
}

/// Angle in [0, 2 pi) by which a 2D transport map M rotates vectors, measured
/// in an orthonormal frame of the metric diag(1, g11) at the base point.
inline double rotation_angle(const Matrix& m, double g11) {
  Matrix d = Matrix::Identity(2, 2);
  d(1, 1) = std::sqrt(g11);
  const Matrix q = d * m * d.inverse();
  double angle = std::atan2(q(1, 0), q(0, 0));
  if (angle < 0) angle += 2.0 * M_PI;
  return angle;
}

}  // namespace pathframes::testing
