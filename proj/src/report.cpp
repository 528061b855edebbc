#include "pathframes/report.hpp"

#include "pathframes/errors.hpp"
#include "pathframes/special_frames.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

namespace pathframes {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConstructionError(std::string("[") + name + "] " + e.what());
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Check upper_bound_check(std::string name, double value, double tolerance, std::string note = {}) {
  Check c{std::move(name), value < tolerance ? CheckStatus::Pass : CheckStatus::Fail, value, tolerance,
          std::move(note)};
  return c;
}

Check skipped(std::string name, std::string note) {
  return Check{std::move(name), CheckStatus::Skipped, kNaN, kNaN, std::move(note)};
}

Matrix random_frame(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix b = Matrix::NullaryExpr(n, n, [&]() { return u(rng); });
    if (std::abs(b.determinant()) > 0.2) return b;
  }
  return Matrix::Identity(n, n);
}

bool is_closed_loop(const PathCurve& path, const Vector& periods) {
  const Vector d = path.point(path.s_end()) - path.point(path.s_start());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    double r = d[i];
    if (i < periods.size() && periods[i] > 0.0) r = std::remainder(d[i], periods[i]);
    if (std::abs(r) > 1e-9) return false;
  }
  return true;
}

/// Rotation angle in [0, 2 pi) of a 2D transport map in an orthonormal frame
/// of the metric g at the base point.
double rotation_angle(const Matrix& transport, const Matrix& g) {
  const Matrix r = g.llt().matrixU();
  const Matrix q = r * transport * r.inverse();
  double angle = std::atan2(q(1, 0), q(0, 0));
  if (angle < 0.0) angle += 2.0 * M_PI;
  return angle;
}

double circular_distance(double a, double b) {
  return std::abs(std::remainder(a - b, 2.0 * M_PI));
}

}  // namespace

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Skipped:
      return "skipped";
  }
  return "skipped";
}

bool RunReport::passed() const {
  for (const auto& c : checks)
    if (c.status == CheckStatus::Fail) return false;
  return true;
}

int RunReport::exit_code() const { return passed() ? 0 : 1; }

std::string RunReport::csv() const {
  std::string out = "s";
  const Eigen::Index n = rows.empty() ? 0 : rows.front().frame.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out += ",a_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
  out += ",residual,commutator_norm,torsion_norm\n";
  const auto stride = static_cast<std::size_t>(scenario.outputs.row_stride);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k % stride != 0 && k + 1 != rows.size()) continue;
    const auto& r = rows[k];
    out += format_double(r.s);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) out += "," + format_double(r.frame(i, j));
    out += "," + format_double(r.residual) + "," + format_double(r.commutator) + "," +
           format_double(r.torsion) + "\n";
  }
  return out;
}

std::string RunReport::summary_json() const {
  using nlohmann::json;
  auto number_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json checks_json = json::array();
  for (const auto& c : checks) {
    json entry = {{"name", c.name}, {"status", to_string(c.status)}, {"value", number_or_null(c.value)},
                  {"tolerance", number_or_null(c.tolerance)}};
    if (!c.note.empty()) entry["note"] = c.note;
    checks_json.push_back(entry);
  }
  json j;
  j["name"] = scenario.name;
  j["geometry"] = scenario.geometry;
  j["path"] = scenario.path_preset.empty() ? scenario.path.type() : scenario.path_preset;
  j["passed"] = passed();
  j["exit_code"] = exit_code();
  j["checks"] = checks_json;
  j["holonomy"] = {{"verdict", holonomy ? json(to_string(*holonomy)) : json(nullptr)},
                   {"max_commutator", holonomy ? json(max_commutator) : json(nullptr)}};
  j["torsion"] = {{"torsion_free", torsion_free}, {"max_norm", max_torsion}};
  j["holonomy_angle"] = holonomy_angle ? json(*holonomy_angle) : json(nullptr);
  j["provenance"] = {{"config_hash", provenance.config_hash},
                     {"grid_nodes", provenance.grid_nodes},
                     {"grid_spacing", provenance.grid_spacing},
                     {"ivp_steps_per_unit", provenance.ivp_steps_per_unit},
                     {"fd_step", provenance.fd_step},
                     {"transverse_step", provenance.transverse_step},
                     {"tube_radius", provenance.tube_radius},
                     {"seed", provenance.seed}};
  return j.dump(2) + "\n";
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunReport run_scenario(const Scenario& sc) {
  RunReport report;
  report.scenario = sc;
  const Tolerances& tol = sc.tolerances;

  const Geometry geo = make_geometry(sc.geometry, sc.parameters);
  const std::vector<double> grid =
      sc.grid_size ? uniform_grid(sc.path.s_start, sc.path.s_end, static_cast<std::size_t>(*sc.grid_size))
                   : grid_for_density(sc.path.s_start, sc.path.s_end, sc.steps_per_unit.value_or(2000.0));
  if (grid.size() < 5) throw ConfigError("grid: needs at least 5 nodes");
  const PathCurve path = sc.path.build(static_cast<int>(grid.size()));
  try {
    path.require_inside(geo.chart);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("path: ") + e.what());
  }
  const double s0 = sc.s0.value_or(sc.path.s_start);
  try {
    grid_index(grid, s0);
  } catch (const ArgumentError&) {
    throw ConfigError("s0: not a node of the sampling grid");
  }
  const int n = geo.chart.dim();
  const Matrix b = sc.initial_frame.value_or(Matrix::Identity(n, n));

  auto& prov = report.provenance;
  prov.config_hash = fnv1a_hex(to_json(sc));
  prov.grid_nodes = grid.size();
  prov.grid_spacing = grid[1] - grid[0];
  prov.ivp_steps_per_unit = sc.ivp_steps_per_unit;
  prov.fd_step = 1e-5;
  prov.transverse_step = sc.transverse_step;
  prov.seed = sc.seed;

  TransportOptions transport_options;
  transport_options.ivp.steps_per_unit = sc.ivp_steps_per_unit;
  transport_options.residual_tolerance = std::numeric_limits<double>::infinity();
  const CoefficientMap w = tangent_components(geo.connection, path);

  const auto transport = stage("transport", [&] { return special_frame_along_path(w, s0, b, grid, transport_options); });
  report.checks.push_back(upper_bound_check("transport_residual", transport.max_residual(), tol.residual));

  std::mt19937_64 rng(sc.seed);
  const double constancy = stage("constancy", [&] {
    const auto other = special_frame_along_path(w, s0, random_frame(rng, n), grid, transport_options);
    return verify_transition_constancy(transport, other);
  });
  report.checks.push_back(upper_bound_check("transition_constancy", constancy, tol.constancy));

  report.rows.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    report.rows[k] = ReportRow{grid[k], transport.frames()[k], transport.residual()[k], kNaN, kNaN};

  const double radius = sc.tube_radius.value_or(TubeMap::default_radius(path));
  prov.tube_radius = radius;
  std::optional<TubeMap> tube;
  std::string tube_note;
  try {
    tube = TubeMap::adapted(path, geo.chart, radius);
  } catch (const GeometryError& e) {
    tube_note = std::string("tube not injective in the chart: ") + e.what();
  } catch (const DomainError& e) {
    tube_note = std::string("tube leaves the chart: ") + e.what();
  }

  std::optional<TubeFrameSolution> all_fields;
  if (tube) {
    TubeFrameOptions options;
    options.ivp.steps_per_unit = sc.ivp_steps_per_unit;
    options.transverse_step = sc.transverse_step;
    options.residual_tolerance = std::numeric_limits<double>::infinity();
    all_fields = stage("all-fields", [&] {
      return special_frame_all_fields(path_connection(geo.connection, path), *tube, geo.chart, s0, b, grid,
                                      options);
    });
    report.checks.push_back(upper_bound_check("all_fields_residual", all_fields->max_residual(), tol.all_fields));

    const auto holonomy = stage("holonomicity", [&] {
      return holonomicity_on_path(all_fields->frame_field(), path, geo.chart, grid, 0.0,
                                  HolonomyTolerance{tol.holonomic, 10.0});
    });
    report.holonomy = holonomy.verdict;
    report.max_commutator = holonomy.max_commutator;
    for (std::size_t k = 0; k < grid.size(); ++k) report.rows[k].commutator = holonomy.per_node[k];

    stage("extension", [&] {
      const auto ext = extend_to_coordinates([&transport](double s) { return transport.frame_at(s); }, *tube,
                                             geo.chart, s0, path.point(s0), grid, 1e-5);
      report.checks.push_back(upper_bound_check("extension_jacobian", ext.jacobian_mismatch(), tol.jacobian));
      report.checks.push_back(upper_bound_check("extension_basis", ext.basis_mismatch(), tol.jacobian));
      const bool det_ok = ext.min_abs_det() > 0.0 && ext.min_det_ratio() >= 0.5 && ext.max_det_ratio() <= 2.0;
      report.checks.push_back(Check{"extension_determinant", det_ok ? CheckStatus::Pass : CheckStatus::Fail,
                                    ext.min_det_ratio(), 0.5,
                                    "determinant ratio to the on-path value must stay in [0.5, 2]; max " +
                                        format_double(ext.max_det_ratio())});

      std::vector<double> stations;
      const std::size_t count = std::min<std::size_t>(grid.size(), 33);
      for (std::size_t i = 0; i < count; ++i) stations.push_back(grid[i * (grid.size() - 1) / (count - 1)]);
      const auto induced = holonomicity_on_path(ext.induced_frame(1e-4), path, geo.chart, stations, 1e-4,
                                                HolonomyTolerance{tol.holonomic, 10.0});
      report.checks.push_back(Check{"extension_holonomic",
                                    induced.verdict == HolonomyVerdict::Holonomic ? CheckStatus::Pass
                                                                                  : CheckStatus::Fail,
                                    induced.max_commutator, tol.holonomic, {}});
      return 0;
    });
  } else {
    for (const char* name : {"all_fields_residual", "extension_jacobian", "extension_basis",
                             "extension_determinant", "extension_holonomic"})
      report.checks.push_back(skipped(name, tube_note));
  }

  const auto torsion = stage("torsion", [&] {
    const FrameField frame = all_fields ? all_fields->frame_field() : FrameField::coordinate(n);
    return torsion_free_on_path(geo.connection, frame, path, geo.chart, grid, tol.torsion);
  });
  report.torsion_free = torsion.torsion_free;
  report.max_torsion = torsion.max_norm;
  for (std::size_t k = 0; k < grid.size(); ++k) report.rows[k].torsion = torsion.per_node[k];

  if (report.holonomy) {
    const bool consistent = (*report.holonomy == HolonomyVerdict::Holonomic && report.torsion_free) ||
                            (*report.holonomy == HolonomyVerdict::Anholonomic && !report.torsion_free);
    report.checks.push_back(Check{"holonomy_torsion_dichotomy", consistent ? CheckStatus::Pass : CheckStatus::Fail,
                                  report.max_commutator, tol.holonomic,
                                  std::string(to_string(*report.holonomy)) +
                                      (report.torsion_free ? ", torsion free" : ", torsion present")});
  } else {
    report.checks.push_back(skipped("holonomy_torsion_dichotomy", tube_note));
  }

  if (sc.expect.holonomy) {
    if (report.holonomy)
      report.checks.push_back(Check{"expected_holonomy",
                                    *report.holonomy == *sc.expect.holonomy ? CheckStatus::Pass : CheckStatus::Fail,
                                    report.max_commutator, tol.holonomic,
                                    std::string("expected ") + to_string(*sc.expect.holonomy)});
    else
      report.checks.push_back(Check{"expected_holonomy", CheckStatus::Fail, kNaN, kNaN,
                                    "no holonomy verdict: " + tube_note});
  }

  if (n == 2 && geo.metric && is_closed_loop(path, geo.periods)) {
    const Matrix loop = transport.frames().back() * transport.frames().front().inverse();
    report.holonomy_angle = rotation_angle(loop, (*geo.metric)(path.point(path.s_start())));
  }
  if (sc.expect.holonomy_angle) {
    if (report.holonomy_angle)
      report.checks.push_back(upper_bound_check("holonomy_angle",
                                                circular_distance(*report.holonomy_angle, *sc.expect.holonomy_angle),
                                                tol.angle, "distance to expected angle"));
    else
      report.checks.push_back(Check{"holonomy_angle", CheckStatus::Fail, kNaN, tol.angle,
                                    "path is not a closed loop of a geometry with a metric"});
  }
  return report;
}

std::vector<std::filesystem::path> write_report(const RunReport& report, const std::filesystem::path& directory) {
  std::vector<std::filesystem::path> written;
  std::filesystem::create_directories(directory);
  auto write = [&](const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write '" + file.string() + "'");
    out << text;
    written.push_back(file);
  };
  if (report.scenario.outputs.csv) write(directory / (report.scenario.name + ".csv"), report.csv());
  if (report.scenario.outputs.summary)
    write(directory / (report.scenario.name + ".summary.json"), report.summary_json());
  return written;
}

}  // namespace pathframes
