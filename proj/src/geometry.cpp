#include "pathframes/geometry.hpp"

#include "pathframes/errors.hpp"

#include <cmath>
#include <sstream>

namespace pathframes {

ChartDomain::ChartDomain(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() < 1) throw ArgumentError("chart dimension must be at least 1");
  if (lower_.size() != upper_.size())
    throw ArgumentError("chart bounds have mismatched lengths");
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i])) {
      std::ostringstream os;
      os << "chart bound " << i << " is empty: lower " << lower_[i] << " >= upper " << upper_[i];
      throw ArgumentError(os.str());
    }
  }
}

bool ChartDomain::contains(const Vector& x) const {
  if (x.size() != lower_.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
  return true;
}

void ChartDomain::require_inside(const Vector& x, const char* what) const {
  if (x.size() != lower_.size()) {
    std::ostringstream os;
    os << what << " has " << x.size() << " components, chart dimension is " << lower_.size();
    throw DomainError(os.str());
  }
  if (!contains(x)) {
    std::ostringstream os;
    os << what << " (" << x.transpose() << ") lies outside the chart box";
    throw DomainError(os.str());
  }
}

double default_step(const Vector& x) {
  return 1e-5 * std::max(1.0, x.size() ? x.cwiseAbs().maxCoeff() : 0.0);
}

PathCurve::PathCurve(double s_start, double s_end, PointMap gamma, PointMap gamma_dot,
                     int grid_size)
    : s_start_(s_start),
      s_end_(s_end),
      gamma_(std::move(gamma)),
      gamma_dot_(std::move(gamma_dot)),
      grid_size_(grid_size) {
  if (!(s_start_ < s_end_)) throw ArgumentError("path requires s_start < s_end");
  if (grid_size_ < 2) throw ArgumentError("path grid needs at least 2 nodes");
  if (!gamma_ || !gamma_dot_) throw ArgumentError("path maps must be callable");
}

int PathCurve::dim() const { return static_cast<int>(gamma_(s_start_).size()); }

Vector PathCurve::point(double s) const { return gamma_(s); }

Vector PathCurve::tangent(double s) const { return gamma_dot_(s); }

std::vector<double> PathCurve::grid() const {
  std::vector<double> g(static_cast<std::size_t>(grid_size_));
  const double h = (s_end_ - s_start_) / (grid_size_ - 1);
  for (int k = 0; k < grid_size_; ++k) g[static_cast<std::size_t>(k)] = s_start_ + k * h;
  g.back() = s_end_;
  return g;
}

PathCurve PathCurve::with_grid_size(int grid_size) const {
  return PathCurve(s_start_, s_end_, gamma_, gamma_dot_, grid_size);
}

void PathCurve::require_inside(const ChartDomain& chart) const {
  for (double s : grid()) chart.require_inside(point(s), "path point");
}

double PathCurve::tangent_consistency(double h) const {
  double worst = 0.0;
  for (double s : grid()) {
    const Vector fd = (gamma_(s + h) - gamma_(s - h)) / (2.0 * h);
    worst = std::max(worst, (fd - gamma_dot_(s)).cwiseAbs().maxCoeff());
  }
  return worst;
}

PathCurve PathCurve::line(const Vector& from, const Vector& to, double s_start, double s_end,
                          int grid_size) {
  if (from.size() != to.size()) throw ArgumentError("line endpoints differ in dimension");
  const Vector velocity = (to - from) / (s_end - s_start);
  return PathCurve(
      s_start, s_end, [from, velocity, s_start](double s) -> Vector { return from + (s - s_start) * velocity; },
      [velocity](double) -> Vector { return velocity; }, grid_size);
}

PathCurve PathCurve::circle(const Vector& center, double radius, double s_start, double s_end,
                            int grid_size) {
  if (center.size() < 2) throw ArgumentError("circle needs at least two coordinates");
  if (!(radius > 0.0)) throw ArgumentError("circle radius must be positive");
  return PathCurve(
      s_start, s_end,
      [center, radius](double s) -> Vector {
        Vector x = center;
        x[0] += radius * std::cos(s);
        x[1] += radius * std::sin(s);
        return x;
      },
      [center, radius](double s) -> Vector {
        Vector v = Vector::Zero(center.size());
        v[0] = -radius * std::sin(s);
        v[1] = radius * std::cos(s);
        return v;
      },
      grid_size);
}

PathCurve PathCurve::coordinate_line(const Vector& base, int axis, double s_start, double s_end,
                                     int grid_size) {
  if (axis < 0 || axis >= base.size()) throw ArgumentError("coordinate-line axis out of range");
  Vector direction = Vector::Zero(base.size());
  direction[axis] = 1.0;
  return PathCurve(
      s_start, s_end, [base, direction](double s) -> Vector { return base + s * direction; },
      [direction](double) -> Vector { return direction; }, grid_size);
}

void require_invertible(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw DegeneracyError(std::string(what) + " is not square");
  if (!m.allFinite()) throw DegeneracyError(std::string(what) + " has non-finite entries");
  Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible()) throw DegeneracyError(std::string(what) + " is singular");
}

FrameField::FrameField(MatrixField map) : map_(std::move(map)) {
  if (!map_) throw ArgumentError("frame map must be callable");
}

Matrix FrameField::operator()(const Vector& x) const {
  Matrix a = map_(x);
  if (a.rows() != x.size() || a.cols() != x.size())
    throw ArgumentError("frame matrix size does not match the point dimension");
  require_invertible(a, "frame matrix");
  return a;
}

FrameField FrameField::coordinate(int n) {
  return FrameField([n](const Vector&) -> Matrix { return Matrix::Identity(n, n); });
}

namespace {

void check_stencil(const ChartDomain& chart, const Vector& x, double h) {
  if (!(h > 0.0)) throw ArgumentError("finite-difference step must be positive");
  chart.require_inside(x);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vector probe = x;
    probe[k] += h;
    chart.require_inside(probe, "finite-difference stencil point");
    probe[k] = x[k] - h;
    chart.require_inside(probe, "finite-difference stencil point");
  }
}

}  // namespace

std::vector<Matrix> finite_difference_jacobian(const MatrixField& f, const ChartDomain& chart,
                                               const Vector& x, double h) {
  check_stencil(chart, x, h);
  std::vector<Matrix> partials;
  partials.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vector plus = x;
    Vector minus = x;
    plus[k] += h;
    minus[k] -= h;
    partials.push_back((f(plus) - f(minus)) / (2.0 * h));
  }
  return partials;
}

Matrix finite_difference_vector_jacobian(const VectorField& f, const ChartDomain& chart,
                                         const Vector& x, double h) {
  check_stencil(chart, x, h);
  const Vector f0 = f(x);
  Matrix jac(f0.size(), x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vector plus = x;
    Vector minus = x;
    plus[k] += h;
    minus[k] -= h;
    jac.col(k) = (f(plus) - f(minus)) / (2.0 * h);
  }
  return jac;
}

Tensor3 commutation_coefficients(const FrameField& frame, const ChartDomain& chart,
                                 const Vector& x, double h) {
  const int n = static_cast<int>(x.size());
  const Matrix a = frame(x);
  const auto da = finite_difference_jacobian([&frame](const Vector& p) { return frame(p); },
                                             chart, x, h);
  const Eigen::PartialPivLU<Matrix> lu(a);

  Tensor3 c(n);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      // Coordinate components of [E_j, E_k] = E_j(A_k) - E_k(A_j).
      Vector bracket = Vector::Zero(n);
      for (int m = 0; m < n; ++m)
        bracket += a(m, j) * da[static_cast<std::size_t>(m)].col(k) -
                   a(m, k) * da[static_cast<std::size_t>(m)].col(j);
      const Vector in_frame = lu.solve(bracket);
      for (int i = 0; i < n; ++i) {
        c(i, j, k) = in_frame[i];
        c(i, k, j) = -in_frame[i];
      }
    }
  }
  return c;
}

}  // namespace pathframes
