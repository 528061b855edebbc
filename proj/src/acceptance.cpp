#include "pathframes/acceptance.hpp"

#include "pathframes/coordinate_extension.hpp"
#include "pathframes/errors.hpp"
#include "pathframes/grid_calculus.hpp"
#include "pathframes/registry.hpp"
#include "pathframes/report.hpp"
#include "pathframes/scenario.hpp"
#include "pathframes/special_frames.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

namespace pathframes {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Case {
  Geometry geo;
  std::string path_name;
  PathCurve path;
  std::vector<double> grid;

  std::string label() const { return geo.name + "/" + path_name; }
};

Case make_case(const std::string& geometry, const std::string& path_name, double density,
               const std::map<std::string, double>& params = {}) {
  Geometry geo = make_geometry(geometry, params);
  const PathSpec& spec = find_path(geo, path_name);
  auto grid = grid_for_density(spec.s_start, spec.s_end, density);
  auto path = spec.build(static_cast<int>(grid.size()));
  return Case{std::move(geo), path_name, std::move(path), std::move(grid)};
}

std::vector<Case> all_cases(double density) {
  std::vector<Case> cases;
  for (const auto& name : list_geometries())
    for (const auto& p : make_geometry(name).paths) cases.push_back(make_case(name, p.name, density));
  return cases;
}

TransportOptions unchecked_transport(double density) {
  TransportOptions o;
  o.ivp.steps_per_unit = density;
  o.residual_tolerance = std::numeric_limits<double>::infinity();
  return o;
}

TubeFrameOptions unchecked_tube(double density) {
  TubeFrameOptions o;
  o.ivp.steps_per_unit = density;
  o.residual_tolerance = std::numeric_limits<double>::infinity();
  return o;
}

TransportSolution transport(const Case& c, const Matrix& b, double density) {
  return special_frame_along_path(tangent_components(c.geo.connection, c.path), c.path.s_start(), b, c.grid,
                                  unchecked_transport(density));
}

TubeMap default_tube(const Case& c) {
  return TubeMap::adapted(c.path, c.geo.chart, TubeMap::default_radius(c.path));
}

TubeFrameSolution all_fields(const Case& c, const TubeMap& tube, double density) {
  return special_frame_all_fields(path_connection(c.geo.connection, c.path), tube, c.geo.chart,
                                  c.path.s_start(), Matrix::Identity(2, 2), c.grid, unchecked_tube(density));
}

Matrix random_frame(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix b = Matrix::NullaryExpr(n, n, [&]() { return u(rng); });
  while (std::abs(b.determinant()) < 0.2) b = Matrix::NullaryExpr(n, n, [&]() { return u(rng); });
  return b;
}

std::vector<std::size_t> stations(std::size_t nodes, std::size_t count) {
  count = std::min(nodes, count);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(i * (nodes - 1) / (count - 1));
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Oracle for the latitude loop, fixed before any transport is run: along
// theta = theta0 the tangent components W are constant with W^2 = -c^2 I,
// c = cos(theta0), so exp(-s W) = cos(c s) I - sin(c s) / c W.
Matrix latitude_oracle(double theta0, double s) {
  const double c = std::cos(theta0);
  Matrix w(2, 2);
  w << 0.0, -std::sin(theta0) * c, c / std::sin(theta0), 0.0;
  return std::cos(c * s) * Matrix::Identity(2, 2) - (std::sin(c * s) / c) * w;
}

double orthonormal_rotation_angle(const Matrix& m, double theta0) {
  Matrix d = Matrix::Identity(2, 2);
  d(1, 1) = std::sin(theta0);
  const Matrix q = d * m * d.inverse();
  double angle = std::atan2(q(1, 0), q(0, 0));
  if (angle < 0.0) angle += 2.0 * M_PI;
  return angle;
}

CriterionResult residual_criterion(const AcceptanceOptions& opt) {
  CriterionResult r{1, "along-path residual", false, 0.0, 1e-8, {}, 0.0};
  double slowest = 0.0;
  std::string worst_case, slowest_case;
  for (const auto& c : all_cases(opt.steps_per_unit)) {
    const auto start = Clock::now();
    const auto sol = transport(c, Matrix::Identity(2, 2), opt.steps_per_unit);
    const double elapsed = seconds_since(start);
    if (sol.max_residual() >= r.value) {
      r.value = sol.max_residual();
      worst_case = c.label();
    }
    if (elapsed >= slowest) {
      slowest = elapsed;
      slowest_case = c.label();
    }
  }
  r.passed = r.value < r.threshold && slowest < 5.0;
  r.detail = "8 scenarios, worst " + worst_case + "; slowest " + slowest_case + " " + fmt(slowest) + " s (limit 5 s)";
  return r;
}

CriterionResult rk4_order_criterion() {
  CriterionResult r{2, "rk4 order", false, 0.0, 12.0, {}, 0.0};
  Matrix z(2, 2);
  z << 0.0, -1.0, 1.0, 0.0;
  const CoefficientMap zmap = [z](double) { return z; };
  std::vector<double> ratios;
  double previous = 0.0;
  for (int steps : {10, 20, 40, 80}) {
    const auto sol = solve_matrix_ivp(zmap, 0.0, uniform_grid(0.0, 2.0, static_cast<std::size_t>(steps + 1)),
                                      IvpOptions{0.0});
    double err = 0.0;
    for (std::size_t k = 0; k < sol.grid().size(); ++k) {
      const double s = sol.grid()[k];
      Matrix exact(2, 2);
      exact << std::cos(s), -std::sin(s), std::sin(s), std::cos(s);
      err = std::max(err, (sol.at_node(k) - exact).cwiseAbs().maxCoeff());
    }
    if (previous > 0.0) ratios.push_back(previous / err);
    previous = err;
  }
  r.value = *std::min_element(ratios.begin(), ratios.end());
  const double high = *std::max_element(ratios.begin(), ratios.end());
  r.passed = r.value >= 12.0 && high <= 20.0;
  r.detail = "ratios " + fmt(ratios[0]) + ", " + fmt(ratios[1]) + ", " + fmt(ratios[2]) + " must lie in [12, 20]";
  return r;
}

CriterionResult holonomy_criterion(const AcceptanceOptions& opt) {
  CriterionResult r{3, "sphere holonomy", false, 0.0, 1e-6, {}, 0.0};
  const double theta0 = M_PI / 3.0;
  const double expected = 2.0 * M_PI * (1.0 - std::cos(theta0));
  const Matrix oracle = latitude_oracle(theta0, 2.0 * M_PI);
  const double oracle_angle = orthonormal_rotation_angle(oracle, theta0);

  const Case c = make_case("sphere2", "latitude", opt.steps_per_unit);
  const auto sol = transport(c, Matrix::Identity(2, 2), opt.steps_per_unit);
  const Matrix loop = sol.frames().back();
  const double angle = orthonormal_rotation_angle(loop, theta0);
  r.value = std::abs(std::remainder(angle - expected, 2.0 * M_PI));
  const double oracle_gap = std::abs(std::remainder(oracle_angle - expected, 2.0 * M_PI));
  const double matrix_gap = (loop - oracle).cwiseAbs().maxCoeff();
  r.passed = r.value < r.threshold && oracle_gap < 1e-12 && matrix_gap < 1e-6;
  r.detail = "angle " + fmt(angle) + " vs 2 pi (1 - cos theta0) = " + fmt(expected) + "; |A(2 pi) - oracle| " +
             fmt(matrix_gap);
  return r;
}

CriterionResult constancy_criterion(const AcceptanceOptions& opt) {
  CriterionResult r{4, "transition constancy", false, 0.0, 1e-7, {}, 0.0};
  std::mt19937_64 rng(opt.seed);
  for (const auto& name : list_geometries()) {
    const Case c = make_case(name, make_geometry(name).paths.front().name, opt.steps_per_unit);
    for (int pair = 0; pair < 10; ++pair) {
      const auto first = transport(c, random_frame(rng, 2), opt.steps_per_unit);
      const auto second = transport(c, random_frame(rng, 2), opt.steps_per_unit);
      r.value = std::max(r.value, verify_transition_constancy(first, second));
    }
  }
  r.passed = r.value < r.threshold;
  r.detail = "10 random pairs on each of 4 geometries";
  return r;
}

CriterionResult round_trip_criterion(const AcceptanceOptions& opt) {
  CriterionResult r{5, "linearity round trip", false, 0.0, 1e-5, {}, 0.0};
  std::mt19937_64 rng(opt.seed + 5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const auto& [name, path_name] : std::vector<std::pair<std::string, std::string>>{
           {"flat", "line"}, {"polar-flat", "line"}, {"sphere2", "latitude-arc"}, {"torsion-const", "line"}}) {
    const Case c = make_case(name, path_name, opt.steps_per_unit);
    const auto tube = default_tube(c);
    const auto sol = all_fields(c, tube, opt.steps_per_unit);
    const MatrixField field = [&sol](const Vector& x) { return sol.frame_at_point(x); };
    const auto s_field = SDerivationField::from_connection(c.geo.connection, c.geo.chart);
    std::vector<Vector> probes;
    for (int p = 0; p < 20; ++p) {
      Vector v(2);
      v << u(rng), u(rng);
      probes.push_back(v);
    }
    for (std::size_t k : stations(c.grid.size(), 41)) {
      const Vector x = c.path.point(c.grid[k]);
      const auto d = finite_difference_jacobian(field, c.geo.chart, x, 1e-4);
      const Matrix ainv = field(x).inverse();
      for (const auto& v : probes) {
        Matrix extracted = Matrix::Zero(2, 2);
        for (int m = 0; m < 2; ++m) extracted -= d[m] * ainv * v[m];
        const Matrix w = derivation_components(s_field, [v](const Vector&) -> Vector { return v; },
                                               FrameField::coordinate(2), c.geo.chart, x, default_step(x));
        r.value = std::max(r.value, (extracted - w).cwiseAbs().maxCoeff());
      }
    }
  }

  Matrix sigma(2, 2);
  sigma << 0.0, 1.0, 0.0, 0.0;
  const SDerivationField quadratic{[sigma](const VectorField& x, const Vector& p) -> Matrix {
                                     const double x1 = x(p)[0];
                                     return x1 * x1 * sigma;
                                   },
                                   SDerivationField::Linearity::General};
  const Case flat = make_case("flat", "line", 50.0);
  const auto rejected = is_linear_along_path(quadratic, flat.path, flat.geo.chart, 6, opt.seed);
  r.passed = r.value < r.threshold && !rejected.linear && rejected.residual > 1e-2;
  r.detail = "20 probes on 4 geometries; quadratic fixture residual " + fmt(rejected.residual) + " (must exceed 1e-2)";
  return r;
}

CriterionResult all_fields_criterion(const AcceptanceOptions& opt) {
  CriterionResult r{6, "all-fields residual", false, 0.0, 5e-6, {}, 0.0};
  const Case c = make_case("sphere2", "latitude-arc", opt.steps_per_unit);
  const auto sol = all_fields(c, default_tube(c), opt.steps_per_unit);
  r.value = sol.max_residual();
  r.passed = r.value < r.threshold;
  r.detail = "sphere2 latitude arc, transverse step 1e-4";
  return r;
}

CriterionResult extension_criterion(const AcceptanceOptions& opt) {
  CriterionResult r{7, "coordinate extension", false, 0.0, 5e-6, {}, 0.0};
  double basis = 0.0, min_ratio = std::numeric_limits<double>::infinity(), max_ratio = 0.0;
  double min_det = std::numeric_limits<double>::infinity();
  int count = 0;
  for (const auto& c : all_cases(opt.steps_per_unit)) {
    std::optional<TubeMap> tube;
    try {
      tube = default_tube(c);
    } catch (const GeometryError&) {
      continue;
    }
    const auto sol = transport(c, Matrix::Identity(2, 2), opt.steps_per_unit);
    const auto ext = extend_to_coordinates([&sol](double s) { return sol.frame_at(s); }, *tube, c.geo.chart,
                                           c.path.s_start(), c.path.point(c.path.s_start()), c.grid, 1e-5);
    r.value = std::max(r.value, ext.jacobian_mismatch());
    basis = std::max(basis, ext.basis_mismatch());
    min_ratio = std::min(min_ratio, ext.min_det_ratio());
    max_ratio = std::max(max_ratio, ext.max_det_ratio());
    min_det = std::min(min_det, ext.min_abs_det());
    ++count;
  }
  r.passed = count > 0 && r.value < r.threshold && basis < 5e-6 && min_det > 0.0;
  r.detail = std::to_string(count) + " injective scenarios; basis mismatch " + fmt(basis) +
             "; det ratio in [" + fmt(min_ratio) + ", " + fmt(max_ratio) + "], min |det| " + fmt(min_det);
  return r;
}

CriterionResult dichotomy_criterion(const AcceptanceOptions& opt) {
  CriterionResult r{8, "holonomic iff torsion free", false, 0.0, 1e-5, {}, 0.0};
  bool verdicts_ok = true;
  double free_worst = 0.0;
  double torsion_least = std::numeric_limits<double>::infinity();
  for (const auto& c : all_cases(opt.steps_per_unit)) {
    std::optional<TubeMap> tube;
    try {
      tube = default_tube(c);
    } catch (const GeometryError&) {
      continue;
    }
    const auto sol = all_fields(c, *tube, opt.steps_per_unit);
    const FrameField frame = sol.frame_field();
    const auto report = holonomicity_on_path(frame, c.path, c.geo.chart, c.grid, 0.0);
    const bool has_torsion = c.geo.name == "torsion-const";
    if (has_torsion) {
      verdicts_ok = verdicts_ok && report.verdict == HolonomyVerdict::Anholonomic;
      torsion_least = std::min(torsion_least, report.max_commutator);
    } else {
      verdicts_ok = verdicts_ok && report.verdict == HolonomyVerdict::Holonomic;
      free_worst = std::max(free_worst, report.max_commutator);
    }
    for (std::size_t k : stations(c.grid.size(), 101)) {
      const Vector x = c.path.point(c.grid[k]);
      const double h = default_step(x);
      const auto comm = commutation_coefficients(frame, c.geo.chart, x, h);
      const auto tors = torsion_tensor(c.geo.connection, frame, c.geo.chart, x, h);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int l = 0; l < 2; ++l) r.value = std::max(r.value, std::abs(comm(i, j, l) + tors(i, j, l)));
    }
  }
  r.passed = verdicts_ok && free_worst < 1e-5 && torsion_least > 1e-4 && r.value < r.threshold;
  r.detail = "|[E_i,E_j] + T(E_i,E_j)| shown; torsion-free max commutator " + fmt(free_worst) +
             " (< 1e-5), torsion-const min of max commutator " + fmt(torsion_least) + " (> 1e-4)";
  return r;
}

CriterionResult reduction_criterion(const AcceptanceOptions& opt) {
  CriterionResult r{9, "covariant derivative reduction", false, 0.0, 1e-7, {}, 0.0};
  std::mt19937_64 rng(opt.seed + 9);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), freq(0.5, 3.0), phase(0.0, 2.0 * M_PI);
  for (const auto& c : all_cases(opt.steps_per_unit)) {
    const auto sol = transport(c, Matrix::Identity(2, 2), opt.steps_per_unit);
    const double h = uniform_spacing(c.grid);
    for (int trial = 0; trial < 10; ++trial) {
      double a[2][2], w[2][2], p[2][2];
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          a[i][j] = amp(rng);
          w[i][j] = freq(rng);
          p[i][j] = phase(rng);
        }
      const std::function<Vector(double)> v = [=](double s) {
        Vector out(2);
        for (int i = 0; i < 2; ++i)
          out[i] = a[i][0] * std::sin(w[i][0] * s + p[i][0]) + a[i][1] * std::cos(w[i][1] * s + p[i][1]);
        return out;
      };
      const auto covariant = derivative_along_path(sol.components_on_grid(), v, c.grid);
      std::vector<Vector> v_frame;
      v_frame.reserve(c.grid.size());
      for (std::size_t k = 0; k < c.grid.size(); ++k) v_frame.push_back(sol.frames()[k].lu().solve(v(c.grid[k])));
      const auto plain = grid_derivative(v_frame, h);
      for (std::size_t k = 0; k < c.grid.size(); ++k)
        r.value = std::max(r.value, (sol.frames()[k].lu().solve(covariant[k]) - plain[k]).cwiseAbs().maxCoeff());
    }
  }
  r.passed = r.value < r.threshold;
  r.detail = "10 random V on each of 8 paths";
  return r;
}

FrameField random_twisted_frame(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
  return FrameField([a, b, c, d](const Vector& x) -> Matrix {
    Matrix m(2, 2);
    m << 1.0 + a * std::sin(x[1]), b * x[0], c * std::cos(x[0] + x[1]), 1.0 + d * std::sin(x[0]);
    return m;
  });
}

CriterionResult torsion_consistency_criterion(const AcceptanceOptions& opt) {
  CriterionResult r{10, "torsion operator vs tensor", false, 0.0, 1e-9, {}, 0.0};
  std::mt19937_64 rng(opt.seed + 10);
  std::uniform_real_distribution<double> u(0.0, 1.0), coeff(-2.0, 2.0);
  for (const auto& name : list_geometries()) {
    const Geometry geo = make_geometry(name);
    const Vector lo = geo.chart.lower(), hi = geo.chart.upper();
    for (int trial = 0; trial < 50; ++trial) {
      Vector x(2);
      for (int i = 0; i < 2; ++i) {
        // Middle part of the chart, away from coordinate singularities.
        const double l = std::max(lo[i], -3.0) + 0.25, h = std::min(hi[i], 3.0) - 0.25;
        x[i] = l + u(rng) * (h - l);
      }
      const FrameField frame = (trial % 2 == 0) ? FrameField::coordinate(2) : random_twisted_frame(rng);
      Matrix mx(2, 2), my(2, 2);
      Vector cx(2), cy(2);
      for (int i = 0; i < 2; ++i) {
        cx[i] = coeff(rng);
        cy[i] = coeff(rng);
        for (int j = 0; j < 2; ++j) {
          mx(i, j) = coeff(rng);
          my(i, j) = coeff(rng);
        }
      }
      const VectorField xf = [cx, mx](const Vector& p) -> Vector { return cx + mx * p; };
      const VectorField yf = [cy, my](const Vector& p) -> Vector { return cy + my * p; };
      const double step = default_step(x);
      const Vector op = torsion_of_derivation(geo.connection, xf, yf, frame, geo.chart, x, step);
      const Tensor3 t = torsion_tensor(geo.connection, frame, geo.chart, x, step);
      const Matrix a = frame(x);
      const Vector xs = a.lu().solve(xf(x)), ys = a.lu().solve(yf(x));
      Vector contracted = Vector::Zero(2);
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) contracted[i] += t(i, k, l) * xs[k] * ys[l];
      // Relative to the size of the terms being contracted, since T itself
      // vanishes for the torsion-free geometries.
      const Tensor3 g = connection_in_frame(geo.connection, frame, geo.chart, x, step);
      const Tensor3 c = commutation_coefficients(frame, geo.chart, x, step);
      const double scale = std::max({contracted.cwiseAbs().maxCoeff(),
                                     std::max(g.max_abs(), c.max_abs()) * xs.cwiseAbs().maxCoeff() *
                                         ys.cwiseAbs().maxCoeff(),
                                     std::numeric_limits<double>::min()});
      r.value = std::max(r.value, (op - contracted).cwiseAbs().maxCoeff() / scale);
    }
  }
  r.passed = r.value < r.threshold;
  r.detail = "50 random triples per geometry, coordinate and anholonomic frames";
  return r;
}

CriterionResult determinism_criterion(const AcceptanceOptions& opt) {
  CriterionResult r{11, "determinism", false, 0.0, 0.0, {}, 0.0};
  std::ostringstream config;
  config << R"({"name": "determinism", "geometry": "sphere2", "path": "latitude-arc", )"
         << R"("grid": {"steps_per_unit": )" << opt.steps_per_unit << R"(}, "seed": 7})";
  const Scenario sc = parse_scenario(config.str());
  const std::string first = run_scenario(sc).csv();
  const std::string second = run_scenario(sc).csv();
  std::size_t differing = first.size() == second.size() ? 0 : 1;
  for (std::size_t i = 0; i < std::min(first.size(), second.size()); ++i) differing += first[i] != second[i];
  r.value = static_cast<double>(differing);
  r.passed = differing == 0 && !first.empty();
  r.detail = "sphere2 latitude arc, " + std::to_string(first.size()) + " CSV bytes compared";
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  const std::vector<std::function<CriterionResult()>> criteria{
      [&] { return residual_criterion(options); },
      [] { return rk4_order_criterion(); },
      [&] { return holonomy_criterion(options); },
      [&] { return constancy_criterion(options); },
      [&] { return round_trip_criterion(options); },
      [&] { return all_fields_criterion(options); },
      [&] { return extension_criterion(options); },
      [&] { return dichotomy_criterion(options); },
      [&] { return reduction_criterion(options); },
      [&] { return torsion_consistency_criterion(options); },
      [&] { return determinism_criterion(options); },
  };
  std::vector<CriterionResult> results;
  int id = 1;
  for (const auto& run : criteria) {
    const auto start = Clock::now();
    CriterionResult result;
    try {
      result = run();
    } catch (const std::exception& e) {
      result = CriterionResult{id, "criterion " + std::to_string(id), false, std::nan(""), std::nan(""),
                               std::string("error: ") + e.what(), 0.0};
    }
    result.id = id++;
    result.seconds = seconds_since(start);
    results.push_back(result);
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "[%s] %2d %-32s value %-10.3g bound %-8.3g %6.2fs  ", r.passed ? "PASS" : "FAIL",
                r.id, r.name.c_str(), r.value, r.threshold, r.seconds);
  return buf + r.detail;
}

}  // namespace pathframes
