#include "pathframes/tube.hpp"

#include "pathframes/errors.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace pathframes {

namespace {

using CellKey = std::uint64_t;

CellKey cell_key(const Vector& x, double cell) {
  std::uint64_t h = 1469598103934665603ull;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const auto c = static_cast<std::int64_t>(std::floor(x[i] / cell));
    h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

/// Spatial hash over a point set; neighbors(x) returns indices in the
/// 3^n cells around x.
class PointHash {
 public:
  PointHash() = default;
  PointHash(const std::vector<Vector>& points, double cell) : cell_(cell) {
    for (std::size_t i = 0; i < points.size(); ++i) buckets_[cell_key(points[i], cell_)].push_back(i);
  }

  template <typename Visit>
  void for_each_near(const Vector& x, Visit&& visit) const {
    const auto n = x.size();
    std::vector<int> offset(static_cast<std::size_t>(n), -1);
    while (true) {
      Vector probe = x;
      for (Eigen::Index i = 0; i < n; ++i) probe[i] += offset[static_cast<std::size_t>(i)] * cell_;
      auto it = buckets_.find(cell_key(probe, cell_));
      if (it != buckets_.end())
        for (std::size_t idx : it->second) visit(idx);
      Eigen::Index d = 0;
      while (d < n && offset[static_cast<std::size_t>(d)] == 1) offset[static_cast<std::size_t>(d++)] = -1;
      if (d == n) break;
      ++offset[static_cast<std::size_t>(d)];
    }
  }

 private:
  double cell_ = 1.0;
  std::unordered_map<CellKey, std::vector<std::size_t>> buckets_;
};

}  // namespace

struct TubeMap::Data {
  PathCurve path;
  int n = 0;
  Vector t0;
  double radius = 0.0;
  Matrix initial_complement;  // used for n >= 3
  std::vector<double> sample_s;
  std::vector<Vector> sample_x;
  PointHash hash;
};

const PathCurve& TubeMap::path() const { return data_->path; }
const Vector& TubeMap::t0() const { return data_->t0; }
double TubeMap::radius() const { return data_->radius; }
int TubeMap::dim() const { return data_->n; }

double TubeMap::default_radius(const PathCurve& path) {
  const auto grid = path.grid();
  Vector lo = path.point(grid.front());
  Vector hi = lo;
  for (double s : grid) {
    const Vector x = path.point(s);
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }
  return 0.05 * (hi - lo).maxCoeff();
}

TubeMap TubeMap::adapted(const PathCurve& path, const ChartDomain& chart, double radius) {
  return adapted(path, chart, radius, Vector::Zero(std::max(0, path.dim() - 1)));
}

TubeMap TubeMap::adapted(const PathCurve& path, const ChartDomain& chart, double radius,
                         const Vector& t0) {
  const int n = path.dim();
  if (n != chart.dim()) throw ArgumentError("path and chart dimensions differ");
  if (t0.size() != n - 1) throw ArgumentError("t0 must have n - 1 components");
  if (!(radius > 0.0) && n > 1) throw GeometryError("tube radius must be positive");
  path.require_inside(chart);

  auto data = std::make_shared<Data>(Data{path, n, t0, radius, Matrix(), {}, {}, {}});
  if (n >= 3) {
    const Vector tau = path.tangent(path.s_start()).normalized();
    Eigen::HouseholderQR<Matrix> qr(tau);
    const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    data->initial_complement = q.rightCols(n - 1);
  }

  data->sample_s = path.grid();
  double max_step = 0.0;
  for (std::size_t k = 0; k < data->sample_s.size(); ++k) {
    data->sample_x.push_back(path.point(data->sample_s[k]));
    if (k > 0) max_step = std::max(max_step, (data->sample_x[k] - data->sample_x[k - 1]).norm());
  }
  const double cell = radius * std::sqrt(static_cast<double>(std::max(1, n - 1))) * 1.01 + max_step;
  data->hash = PointHash(data->sample_x, cell);

  TubeMap tube(data);
  const auto report = tube.check_injectivity(chart);
  if (!report.injective) {
    std::ostringstream os;
    os << "tube map is not injective: min separation " << report.min_separation << " (tolerance "
       << report.separation_tolerance << "), min Jacobian ratio " << report.min_det_ratio;
    throw GeometryError(os.str());
  }
  return tube;
}

Matrix TubeMap::transverse_basis(double s) const {
  const int n = data_->n;
  const Vector v = data_->path.tangent(s);
  const double speed = v.norm();
  if (!(speed > 0.0)) throw GeometryError("path tangent vanishes; tube is undefined");
  const Vector tau = v / speed;
  Matrix basis(n, std::max(0, n - 1));
  if (n == 2) {
    basis(0, 0) = -tau[1];
    basis(1, 0) = tau[0];
  } else if (n >= 3) {
    for (int a = 0; a < n - 1; ++a) {
      Vector col = data_->initial_complement.col(a);
      col -= tau.dot(col) * tau;
      for (int b = 0; b < a; ++b) col -= basis.col(b).dot(col) * basis.col(b);
      const double norm = col.norm();
      if (norm < 1e-3) throw GeometryError("transverse complement degenerates along the path");
      basis.col(a) = col / norm;
    }
  }
  return basis;
}

Vector TubeMap::eta(double s, const Vector& t) const {
  if (t.size() != data_->n - 1) throw ArgumentError("transverse coordinate has wrong length");
  if (data_->n == 1) return data_->path.point(s);
  return data_->path.point(s) + transverse_basis(s) * (t - data_->t0);
}

Vector TubeMap::eta_s(double s, const Vector& t) const {
  if (data_->n == 1) return data_->path.tangent(s);
  const double ds = 1e-6 * std::max(1.0, std::abs(s));
  const Matrix dn = (transverse_basis(s + ds) - transverse_basis(s - ds)) / (2.0 * ds);
  return data_->path.tangent(s) + dn * (t - data_->t0);
}

TubeMap::Location TubeMap::locate(const Vector& x) const {
  const int n = data_->n;
  if (x.size() != n) throw DomainError("point dimension does not match the tube");

  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_dist = std::numeric_limits<double>::infinity();
  data_->hash.for_each_near(x, [&](std::size_t idx) {
    const double d = (data_->sample_x[idx] - x).squaredNorm();
    if (d < best_dist) {
      best_dist = d;
      best = idx;
    }
  });
  if (best == std::numeric_limits<std::size_t>::max()) throw DomainError("point is not in the tube");

  Location loc;
  loc.s = data_->sample_s[best];
  loc.t = data_->t0;
  if (n > 1) loc.t += transverse_basis(loc.s).transpose() * (x - data_->path.point(loc.s));

  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  for (int iter = 0; iter < 60; ++iter) {
    const Vector residual = eta(loc.s, loc.t) - x;
    Matrix jac(n, n);
    jac.col(0) = eta_s(loc.s, loc.t);
    if (n > 1) jac.rightCols(n - 1) = transverse_basis(loc.s);
    const Vector step = jac.partialPivLu().solve(residual);
    loc.s -= step[0];
    if (n > 1) loc.t -= step.tail(n - 1);
    if (step.cwiseAbs().maxCoeff() <= 1e-15 * std::max(1.0, std::abs(loc.s))) break;
  }
  if ((eta(loc.s, loc.t) - x).cwiseAbs().maxCoeff() > 1e-11 * scale)
    throw DomainError("tube inversion did not converge");

  const auto& path = data_->path;
  const double slack = (path.s_end() - path.s_start()) / (path.grid_size() - 1);
  if (loc.s < path.s_start() - slack || loc.s > path.s_end() + slack)
    throw DomainError("point lies beyond the ends of the tube");
  if (n > 1 && (loc.t - data_->t0).cwiseAbs().maxCoeff() > 1.5 * data_->radius)
    throw DomainError("point lies outside the tube radius");
  return loc;
}

TubeMap::InjectivityReport TubeMap::check_injectivity(const ChartDomain& chart) const {
  const int n = data_->n;
  const int m = n - 1;
  const auto& path = data_->path;
  const int s_count = std::min(path.grid_size(), 513);
  const double ds = (path.s_end() - path.s_start()) / (s_count - 1);

  int t_count = 1;
  for (int a = 0; a < m; ++a) t_count *= 3;

  struct Sample {
    int is;
    std::vector<int> it;
    Vector x;
  };
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(s_count * t_count));

  InjectivityReport report;
  report.min_det_ratio = std::numeric_limits<double>::infinity();
  double min_speed = std::numeric_limits<double>::infinity();

  for (int is = 0; is < s_count; ++is) {
    const double s = path.s_start() + is * ds;
    const Matrix basis = transverse_basis(s);
    min_speed = std::min(min_speed, path.tangent(s).norm());
    Matrix on_path(n, n);
    on_path.col(0) = path.tangent(s);
    if (m > 0) on_path.rightCols(m) = basis;
    const double det_path = on_path.determinant();

    for (int code = 0; code < t_count; ++code) {
      std::vector<int> it(static_cast<std::size_t>(m));
      Vector t = data_->t0;
      int c = code;
      for (int a = 0; a < m; ++a) {
        it[static_cast<std::size_t>(a)] = c % 3 - 1;
        t[a] += (c % 3 - 1) * data_->radius;
        c /= 3;
      }
      const Vector x = eta(s, t);
      chart.require_inside(x, "tube sample");
      Matrix jac = on_path;
      jac.col(0) = eta_s(s, t);
      report.min_det_ratio = std::min(report.min_det_ratio, jac.determinant() / det_path);
      samples.push_back({is, std::move(it), x});
    }
  }

  const double spacing = m > 0 ? std::min(ds * min_speed, data_->radius) : ds * min_speed;
  report.separation_tolerance = 0.25 * spacing;
  report.min_separation = std::numeric_limits<double>::infinity();
  report.samples = samples.size();

  std::vector<Vector> points;
  points.reserve(samples.size());
  for (const auto& smp : samples) points.push_back(smp.x);
  const PointHash hash(points, report.separation_tolerance);

  bool collision = false;
  for (std::size_t p = 0; p < samples.size(); ++p) {
    hash.for_each_near(samples[p].x, [&](std::size_t q) {
      if (q <= p) return;
      bool adjacent = std::abs(samples[p].is - samples[q].is) <= 1;
      for (int a = 0; adjacent && a < m; ++a)
        adjacent = std::abs(samples[p].it[static_cast<std::size_t>(a)] -
                            samples[q].it[static_cast<std::size_t>(a)]) <= 1;
      if (adjacent) return;
      const double d = (samples[p].x - samples[q].x).norm();
      report.min_separation = std::min(report.min_separation, d);
      if (d < report.separation_tolerance) collision = true;
    });
  }
  report.injective = !collision && report.min_det_ratio > 0.2;
  return report;
}

}  // namespace pathframes
