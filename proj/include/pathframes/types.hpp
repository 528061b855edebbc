#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace pathframes {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Vector field given by its components in the chart's coordinate basis.
using VectorField = std::function<Vector(const Vector&)>;
using MatrixField = std::function<Matrix(const Vector&)>;

/// Rank-3 array indexed (i, j, k) with i the upper index.
///
/// Used for connection coefficients Gamma^i_{jk}, commutation coefficients
/// C^i_{jk} and torsion T^i_{kl}.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  int dim() const { return n_; }

  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

  /// Matrix (i, j) with the last index held at k.
  Matrix slice_last(int k) const {
    Matrix m(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j, k);
    return m;
  }

  void set_slice_last(int k, const Matrix& m) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) (*this)(i, j, k) = m(i, j);
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  double sum_abs() const {
    double s = 0.0;
    for (double v : data_) s += std::abs(v);
    return s;
  }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }

  int n_ = 0;
  std::vector<double> data_;
};

}  // namespace pathframes
