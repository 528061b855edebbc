#include "pathframes/coordinate_extension.hpp"

#include "pathframes/errors.hpp"
#include "pathframes/grid_calculus.hpp"
#include "pathframes/matrix_ivp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pathframes {

Vector CoordinateExtension::integral_to(double s) const {
  const auto& g = data_->grid;
  auto it = std::lower_bound(g.begin(), g.end(), s);
  std::size_t k = 0;
  if (it == g.end()) {
    k = g.size() - 1;
  } else if (it != g.begin()) {
    const auto hi = static_cast<std::size_t>(it - g.begin());
    k = (s - g[hi - 1] <= g[hi] - s) ? hi - 1 : hi;
  }
  const double sk = g[k];
  if (s == sk) return data_->integral[k];
  const auto& path = data_->tube.path();
  auto integrand = [&](double u) -> Vector {
    return data_->frame(u).partialPivLu().solve(path.tangent(u));
  };
  const double mid = 0.5 * (sk + s);
  return data_->integral[k] + ((s - sk) / 6.0) * (integrand(sk) + 4.0 * integrand(mid) + integrand(s));
}

Vector CoordinateExtension::x_prime(double s, const Vector& t) const {
  const auto& path = data_->tube.path();
  const Vector offset = data_->tube.eta(s, t) - path.point(s);
  return data_->x0 + (integral_to(s) - data_->integral_at_s0) +
         data_->frame(s).partialPivLu().solve(offset);
}

Vector CoordinateExtension::x_prime_at(const Vector& x) const {
  const auto loc = data_->tube.locate(x);
  return x_prime(loc.s, loc.t);
}

Matrix CoordinateExtension::jacobian(const Vector& x, double h) const {
  return finite_difference_vector_jacobian([this](const Vector& p) { return x_prime_at(p); },
                                           data_->chart, x, h);
}

FrameField CoordinateExtension::induced_frame(double h) const {
  CoordinateExtension self(data_);
  return FrameField([self, h](const Vector& x) -> Matrix { return self.jacobian(x, h).inverse(); });
}

CoordinateExtension extend_to_coordinates(std::function<Matrix(double)> frame_on_path,
                                          const TubeMap& tube, const ChartDomain& chart,
                                          double s0, const Vector& x0,
                                          const std::vector<double>& grid, double h) {
  const int n = tube.dim();
  if (x0.size() != n) throw ArgumentError("x0 has the wrong dimension");
  const double spacing = uniform_spacing(grid);
  const std::size_t origin = grid_index(grid, s0);
  const double step = h > 0.0 ? h : 1e-5;
  const auto& path = tube.path();

  std::vector<Matrix> frames;
  std::vector<Vector> integrand;
  frames.reserve(grid.size());
  integrand.reserve(grid.size());
  for (double s : grid) {
    Matrix a = frame_on_path(s);
    require_invertible(a, "path frame");
    integrand.push_back(a.partialPivLu().solve(path.tangent(s)));
    frames.push_back(std::move(a));
  }
  auto integral = cumulative_simpson(integrand, spacing);
  Vector at_s0 = integral[origin];

  auto data = std::make_shared<CoordinateExtension::Data>(CoordinateExtension::Data{
      tube, chart, std::move(frame_on_path), grid, std::move(integral), grid[origin], x0,
      std::move(at_s0), 0.0, 0.0, 0.0, 0.0, 0.0});
  CoordinateExtension ext(data);

  std::vector<double> on_path_det(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Matrix jac = ext.jacobian(path.point(grid[k]), step);
    const Matrix& a = frames[k];
    data->jacobian_mismatch = std::max(
        data->jacobian_mismatch, (jac - a.partialPivLu().inverse()).cwiseAbs().maxCoeff());
    data->basis_mismatch =
        std::max(data->basis_mismatch, (jac.partialPivLu().inverse() - a).cwiseAbs().maxCoeff());
    on_path_det[k] = jac.determinant();
  }

  // Determinant across the tube, sampled on at most 129 path stations.
  const int m = n - 1;
  int t_count = 1;
  for (int a = 0; a < m; ++a) t_count *= 3;
  const std::size_t stations = std::min<std::size_t>(grid.size(), 129);
  data->min_det_ratio = std::numeric_limits<double>::infinity();
  data->max_det_ratio = -std::numeric_limits<double>::infinity();
  data->min_abs_det = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < stations; ++i) {
    const std::size_t k = (stations == 1) ? 0 : i * (grid.size() - 1) / (stations - 1);
    for (int code = 0; code < t_count; ++code) {
      Vector t = tube.t0();
      int c = code;
      for (int a = 0; a < m; ++a) {
        t[a] += (c % 3 - 1) * tube.radius();
        c /= 3;
      }
      const double det = ext.jacobian(tube.eta(grid[k], t), step).determinant();
      const double ratio = det / on_path_det[k];
      data->min_det_ratio = std::min(data->min_det_ratio, ratio);
      data->max_det_ratio = std::max(data->max_det_ratio, ratio);
      data->min_abs_det = std::min(data->min_abs_det, std::abs(det));
    }
  }
  return ext;
}

const char* to_string(HolonomyVerdict v) {
  switch (v) {
    case HolonomyVerdict::Holonomic:
      return "holonomic";
    case HolonomyVerdict::Anholonomic:
      return "anholonomic";
    case HolonomyVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

HolonomyReport holonomicity_on_path(const FrameField& frame, const PathCurve& path,
                                    const ChartDomain& chart, const std::vector<double>& grid,
                                    double h, const HolonomyTolerance& tolerance) {
  HolonomyReport report;
  report.per_node.reserve(grid.size());
  for (double s : grid) {
    const Vector x = path.point(s);
    const double step = h > 0.0 ? h : default_step(x);
    const double norm = commutation_coefficients(frame, chart, x, step).max_abs();
    report.per_node.push_back(norm);
    report.max_commutator = std::max(report.max_commutator, norm);
  }
  if (report.max_commutator < tolerance.holonomic)
    report.verdict = HolonomyVerdict::Holonomic;
  else if (report.max_commutator > tolerance.anholonomic_factor * tolerance.holonomic)
    report.verdict = HolonomyVerdict::Anholonomic;
  else
    report.verdict = HolonomyVerdict::Inconclusive;
  return report;
}

TorsionReport torsion_free_on_path(const ConnectionField& conn, const FrameField& frame,
                                   const PathCurve& path, const ChartDomain& chart,
                                   const std::vector<double>& grid, double tolerance, double h) {
  TorsionReport report;
  report.per_node.reserve(grid.size());
  for (double s : grid) {
    const Vector x = path.point(s);
    const double step = h > 0.0 ? h : default_step(x);
    const double norm = torsion_tensor(conn, frame, chart, x, step).sum_abs();
    report.per_node.push_back(norm);
    report.max_norm = std::max(report.max_norm, norm);
  }
  report.torsion_free = report.max_norm < tolerance;
  return report;
}

}  // namespace pathframes
