#include "pathframes/special_frames.hpp"

#include "pathframes/errors.hpp"
#include "pathframes/grid_calculus.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace pathframes {

namespace {

VectorField constant_field(Vector v) {
  return [v = std::move(v)](const Vector&) -> Vector { return v; };
}

Matrix contract_direction(const std::vector<Matrix>& gamma, const Vector& direction) {
  Matrix out = Matrix::Zero(gamma.front().rows(), gamma.front().cols());
  for (std::size_t m = 0; m < gamma.size(); ++m)
    out += gamma[m] * direction[static_cast<Eigen::Index>(m)];
  return out;
}

}  // namespace

PathConnection path_connection(const ConnectionField& conn, const PathCurve& path) {
  return [conn, path](double s) { return conn.direction_matrices(path.point(s)); };
}

PathConnection path_connection(const SDerivationField& s, const PathCurve& path,
                               const ChartDomain& chart) {
  return [s, path, chart](double param) {
    const Vector x = path.point(param);
    const int n = static_cast<int>(x.size());
    const FrameField coordinate = FrameField::coordinate(n);
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m)
      out.push_back(derivation_components(s, constant_field(Vector::Unit(n, m)), coordinate, chart,
                                          x, default_step(x)));
    return out;
  };
}

CoefficientMap tangent_components(const PathConnection& gamma, const PathCurve& path) {
  return [gamma, path](double s) { return contract_direction(gamma(s), path.tangent(s)); };
}

CoefficientMap tangent_components(const ConnectionField& conn, const PathCurve& path) {
  return tangent_components(path_connection(conn, path), path);
}

double TransportSolution::max_residual() const {
  double m = 0.0;
  for (double r : data_->residual) m = std::max(m, r);
  return m;
}

Matrix TransportSolution::frame_at(double s) const { return data_->y.evaluate(s) * data_->b; }

TransportSolution special_frame_along_path(CoefficientMap w_on_path, double s0, const Matrix& b,
                                           const std::vector<double>& grid,
                                           const TransportOptions& options) {
  try {
    require_invertible(b, "initial frame B");
  } catch (const DegeneracyError& e) {
    throw ArgumentError(e.what());
  }
  if (grid.size() < 5) throw ArgumentError("transport grid needs at least 5 nodes");
  const double h = uniform_spacing(grid);

  CoefficientMap z = [w_on_path](double s) -> Matrix { return -w_on_path(s); };
  FundamentalSolution y = solve_matrix_ivp(z, s0, grid, options.ivp);

  std::vector<Matrix> frames;
  std::vector<Matrix> w_grid;
  frames.reserve(grid.size());
  w_grid.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    frames.push_back(y.at_node(k) * b);
    w_grid.push_back(w_on_path(grid[k]));
  }
  frames[y.origin()] = b;

  const auto derivative = grid_derivative(frames, h);
  std::vector<double> residual(grid.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    residual[k] = transform_components(w_grid[k], frames[k], derivative[k]).cwiseAbs().maxCoeff();
    worst = std::max(worst, residual[k]);
  }
  if (!(worst < options.residual_tolerance)) {
    std::ostringstream os;
    os << "special frame residual " << worst << " exceeds tolerance "
       << options.residual_tolerance << " (grid too coarse or integrator misconfigured)";
    throw ConstructionError(os.str());
  }

  auto data = std::make_shared<TransportSolution::Data>(TransportSolution::Data{
      std::move(y), b, std::move(w_on_path), std::move(frames), std::move(w_grid),
      std::move(residual)});
  return TransportSolution(std::move(data));
}

double verify_transition_constancy(const TransportSolution& first,
                                   const TransportSolution& second) {
  const auto& g1 = first.grid();
  const auto& g2 = second.grid();
  if (g1.size() != g2.size()) throw ArgumentError("transport solutions use different grids");
  for (std::size_t k = 0; k < g1.size(); ++k)
    if (std::abs(g1[k] - g2[k]) > 1e-12 * std::max(1.0, std::abs(g1[k])))
      throw ArgumentError("transport solutions use different grids");

  std::vector<Matrix> transition;
  transition.reserve(g1.size());
  for (std::size_t k = 0; k < g1.size(); ++k)
    transition.push_back(first.frames()[k].partialPivLu().solve(second.frames()[k]));
  const auto derivative = grid_derivative(transition, uniform_spacing(g1));
  double worst = 0.0;
  for (const auto& d : derivative) worst = std::max(worst, d.cwiseAbs().maxCoeff());
  return worst;
}

double TubeFrameSolution::max_residual() const {
  double m = 0.0;
  for (double r : data_->residual) m = std::max(m, r);
  return m;
}

std::vector<Matrix> TubeFrameSolution::path_frames() const {
  std::vector<Matrix> out;
  out.reserve(data_->y.values().size());
  for (const auto& y : data_->y.values()) out.push_back(y * data_->b);
  return out;
}

Matrix TubeFrameSolution::frame_at(double s, const Vector& t) const {
  const Matrix on_path = data_->y.evaluate(s) * data_->b;
  const int n = static_cast<int>(on_path.rows());
  if (n == 1) return on_path;
  const Vector offset = t - data_->tube.t0();
  const Matrix basis = data_->tube.transverse_basis(s);
  const auto gamma = data_->gamma(s);
  Matrix bracket = Matrix::Identity(n, n);
  for (int a = 0; a < n - 1; ++a) bracket -= contract_direction(gamma, basis.col(a)) * offset[a];
  return bracket * on_path;
}

Matrix TubeFrameSolution::frame_at_point(const Vector& x) const {
  const auto loc = data_->tube.locate(x);
  return frame_at(loc.s, loc.t);
}

FrameField TubeFrameSolution::frame_field() const {
  TubeFrameSolution self(data_);
  return FrameField([self](const Vector& x) { return self.frame_at_point(x); });
}

TubeFrameSolution special_frame_all_fields(const PathConnection& gamma, const TubeMap& tube,
                                           const ChartDomain& chart, double s0, const Matrix& b,
                                           const std::vector<double>& grid,
                                           const TubeFrameOptions& options) {
  try {
    require_invertible(b, "initial frame B");
  } catch (const DegeneracyError& e) {
    throw ArgumentError(e.what());
  }
  const PathCurve& path = tube.path();
  CoefficientMap z = [gamma, path](double s) -> Matrix {
    return -contract_direction(gamma(s), path.tangent(s));
  };
  FundamentalSolution y = solve_matrix_ivp(z, s0, grid, options.ivp);

  auto data = std::make_shared<TubeFrameSolution::Data>(
      TubeFrameSolution::Data{tube, gamma, std::move(y), b, {}, {}});
  TubeFrameSolution solution(data);

  const MatrixField field = [&solution](const Vector& x) { return solution.frame_at_point(x); };
  double worst = 0.0;
  data->gamma_grid.reserve(grid.size());
  data->residual.reserve(grid.size());
  for (double s : grid) {
    const Vector x = path.point(s);
    const auto g = gamma(s);
    const Matrix a = solution.frame_at(s, tube.t0());
    const auto partials = finite_difference_jacobian(field, chart, x, options.transverse_step);
    double r = 0.0;
    for (std::size_t m = 0; m < g.size(); ++m)
      r = std::max(r, (g[m] * a + partials[m]).cwiseAbs().maxCoeff());
    data->gamma_grid.push_back(g);
    data->residual.push_back(r);
    worst = std::max(worst, r);
  }
  if (!(worst < options.residual_tolerance)) {
    std::ostringstream os;
    os << "all-fields special frame residual " << worst << " exceeds tolerance "
       << options.residual_tolerance;
    throw ConstructionError(os.str());
  }
  return solution;
}

LinearityReport is_linear_along_path(const SDerivationField& s, const PathCurve& path,
                                     const ChartDomain& chart, int probe_count,
                                     std::uint64_t seed, double tolerance,
                                     const std::vector<Vector>& extra_probes) {
  const int n = chart.dim();
  if (probe_count < n) throw ArgumentError("need at least n probe fields");
  for (const auto& p : extra_probes)
    if (p.size() != n) throw ArgumentError("probe field has the wrong dimension");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::vector<Vector> probes = extra_probes;
  for (int p = n; p < probe_count; ++p) {
    Vector c(n);
    for (int i = 0; i < n; ++i) c[i] = coeff(rng);
    probes.push_back(c);
  }

  const FrameField coordinate = FrameField::coordinate(n);
  LinearityReport report;
  for (double param : path.grid()) {
    const Vector x = path.point(param);
    const double h = default_step(x);
    std::vector<Matrix> gamma;
    gamma.reserve(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m)
      gamma.push_back(
          derivation_components(s, constant_field(Vector::Unit(n, m)), coordinate, chart, x, h));
    for (const auto& c : probes) {
      const Matrix w = derivation_components(s, constant_field(c), coordinate, chart, x, h);
      report.residual =
          std::max(report.residual, (w - contract_direction(gamma, c)).cwiseAbs().maxCoeff());
    }
    report.gamma_on_path.push_back(std::move(gamma));
  }
  report.linear = report.residual <= tolerance;
  return report;
}

TubeFrameSolution special_frame_all_fields(const SDerivationField& s, const TubeMap& tube,
                                           const ChartDomain& chart, double s0, const Matrix& b,
                                           const std::vector<double>& grid, int probe_count,
                                           std::uint64_t seed, const TubeFrameOptions& options) {
  const auto report = is_linear_along_path(s, tube.path(), chart, probe_count, seed);
  if (!report.linear) {
    std::ostringstream os;
    os << "derivation is not linear in X along the path (fit residual " << report.residual << ")";
    throw NotAConnectionError(os.str());
  }
  return special_frame_all_fields(path_connection(s, tube.path(), chart), tube, chart, s0, b,
                                  grid, options);
}

std::vector<Vector> derivative_along_path(const std::vector<Matrix>& w_on_grid,
                                          const std::vector<Vector>& v_on_grid,
                                          const std::vector<double>& grid) {
  if (w_on_grid.size() != grid.size() || v_on_grid.size() != grid.size())
    throw ArgumentError("samples do not match the grid");
  auto out = grid_derivative(v_on_grid, uniform_spacing(grid));
  for (std::size_t k = 0; k < grid.size(); ++k) out[k] += w_on_grid[k] * v_on_grid[k];
  return out;
}

std::vector<Vector> derivative_along_path(const std::vector<Matrix>& w_on_grid,
                                          const std::function<Vector(double)>& v,
                                          const std::vector<double>& grid) {
  if (w_on_grid.size() != grid.size()) throw ArgumentError("samples do not match the grid");
  std::vector<Vector> out;
  out.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double s = grid[k];
    const double h = 1e-5 * std::max(1.0, std::abs(s));
    out.push_back((v(s + h) - v(s - h)) / (2.0 * h) + w_on_grid[k] * v(s));
  }
  return out;
}

}  // namespace pathframes
