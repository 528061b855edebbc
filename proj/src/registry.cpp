#include "pathframes/registry.hpp"

#include "pathframes/errors.hpp"

#include <cmath>
#include <numbers>

namespace pathframes {

namespace {

constexpr double kPi = std::numbers::pi;

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Geometry flat_geometry() {
  return Geometry{"flat",
                  ChartDomain(vec2(-10.0, -10.0), vec2(10.0, 10.0)),
                  ConnectionField::flat(2),
                  MatrixField([](const Vector&) -> Matrix { return Matrix::Identity(2, 2); }),
                  Vector::Zero(2),
                  {},
                  {{"line", {LinePath{vec2(0.0, 0.0), vec2(1.0, 0.5)}, 0.0, 1.0}},
                   {"arc", {CirclePath{vec2(0.0, 0.0), 1.0}, 0.0, 1.5 * kPi}}}};
}

Geometry polar_flat_geometry() {
  ConnectionField conn([](const Vector& x) {
    const double r = x[0];
    Tensor3 g(2);
    g(0, 1, 1) = -r;
    g(1, 0, 1) = 1.0 / r;
    g(1, 1, 0) = 1.0 / r;
    return g;
  });
  MatrixField metric = [](const Vector& x) -> Matrix {
    Matrix g = Matrix::Identity(2, 2);
    g(1, 1) = x[0] * x[0];
    return g;
  };
  return Geometry{"polar-flat",
                  ChartDomain(vec2(0.05, -4.0 * kPi), vec2(10.0, 4.0 * kPi)),
                  std::move(conn),
                  std::move(metric),
                  vec2(0.0, 2.0 * kPi),
                  {},
                  {{"circle", {CoordinateLinePath{vec2(1.0, 0.0), 1}, 0.0, 2.0 * kPi}},
                   {"line", {LinePath{vec2(0.5, 0.0), vec2(2.0, 1.0)}, 0.0, 1.0}}}};
}

Geometry sphere2_geometry() {
  ConnectionField conn([](const Vector& x) {
    const double theta = x[0];
    Tensor3 g(2);
    g(0, 1, 1) = -std::sin(theta) * std::cos(theta);
    g(1, 0, 1) = std::cos(theta) / std::sin(theta);
    g(1, 1, 0) = g(1, 0, 1);
    return g;
  });
  MatrixField metric = [](const Vector& x) -> Matrix {
    Matrix g = Matrix::Identity(2, 2);
    g(1, 1) = std::sin(x[0]) * std::sin(x[0]);
    return g;
  };
  return Geometry{"sphere2",
                  ChartDomain(vec2(0.05, -4.0 * kPi), vec2(kPi - 0.05, 4.0 * kPi)),
                  std::move(conn),
                  std::move(metric),
                  vec2(0.0, 2.0 * kPi),
                  {},
                  {{"latitude", {LatitudePath{kPi / 3.0}, 0.0, 2.0 * kPi}},
                   {"latitude-arc", {LatitudePath{kPi / 3.0}, 0.0, kPi}}}};
}

Geometry torsion_const_geometry(double kappa) {
  ConnectionField conn([kappa](const Vector&) {
    Tensor3 g(2);
    g(0, 0, 1) = kappa;
    return g;
  });
  return Geometry{"torsion-const",
                  ChartDomain(vec2(-10.0, -10.0), vec2(10.0, 10.0)),
                  std::move(conn),
                  std::nullopt,
                  Vector::Zero(2),
                  {{"kappa", kappa}},
                  {{"line", {LinePath{vec2(0.0, 0.0), vec2(1.0, 0.5)}, 0.0, 1.0}},
                   {"arc", {CirclePath{vec2(0.0, 0.0), 1.0}, 0.0, 1.5 * kPi}}}};
}

void reject_parameters(const std::string& name, const std::map<std::string, double>& params) {
  if (!params.empty())
    throw ConfigError("geometry '" + name + "' takes no parameters, got '" +
                      params.begin()->first + "'");
}

}  // namespace

std::string PathSpec::type() const {
  struct Visitor {
    std::string operator()(const LinePath&) const { return "line"; }
    std::string operator()(const CirclePath&) const { return "circle"; }
    std::string operator()(const CoordinateLinePath&) const { return "coordinate-line"; }
    std::string operator()(const LatitudePath&) const { return "latitude"; }
  };
  return std::visit(Visitor{}, shape);
}

PathCurve PathSpec::build(int grid_size) const {
  struct Visitor {
    const PathSpec& spec;
    int grid_size;
    PathCurve operator()(const LinePath& p) const {
      return PathCurve::line(p.from, p.to, spec.s_start, spec.s_end, grid_size);
    }
    PathCurve operator()(const CirclePath& p) const {
      return PathCurve::circle(p.center, p.radius, spec.s_start, spec.s_end, grid_size);
    }
    PathCurve operator()(const CoordinateLinePath& p) const {
      return PathCurve::coordinate_line(p.base, p.axis, spec.s_start, spec.s_end, grid_size);
    }
    PathCurve operator()(const LatitudePath& p) const {
      return PathCurve::coordinate_line(vec2(p.theta0, 0.0), 1, spec.s_start, spec.s_end,
                                        grid_size);
    }
  };
  return std::visit(Visitor{*this, grid_size}, shape);
}

std::vector<std::string> list_geometries() {
  return {"flat", "polar-flat", "sphere2", "torsion-const"};
}

GeometryDescription describe(const std::string& name) {
  GeometryDescription d;
  d.name = name;
  if (name == "flat") {
    d.summary = "Euclidean plane in Cartesian coordinates";
    d.coordinates = {"x", "y"};
    d.coefficients = {"all Gamma^i_{jk} = 0"};
  } else if (name == "polar-flat") {
    d.summary = "Euclidean plane in polar coordinates (Levi-Civita connection)";
    d.coordinates = {"r", "phi"};
    d.coefficients = {"Gamma^r_{phi phi} = -r", "Gamma^phi_{r phi} = Gamma^phi_{phi r} = 1/r",
                      "others 0"};
  } else if (name == "sphere2") {
    d.summary = "unit 2-sphere, metric diag(1, sin^2 theta) (Levi-Civita connection)";
    d.coordinates = {"theta", "phi"};
    d.coefficients = {"Gamma^theta_{phi phi} = -sin(theta) cos(theta)",
                      "Gamma^phi_{theta phi} = Gamma^phi_{phi theta} = cot(theta)", "others 0"};
  } else if (name == "torsion-const") {
    d.summary = "plane with a constant non-symmetric connection (torsion 2 kappa)";
    d.coordinates = {"x1", "x2"};
    d.coefficients = {"Gamma^1_{12} = kappa", "others 0"};
    d.parameters = {{"kappa", 0.3}};
  } else {
    throw ConfigError("unknown geometry '" + name + "'");
  }
  for (const auto& p : make_geometry(name).paths) d.paths.push_back(p.name);
  return d;
}

Geometry make_geometry(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "flat") {
    reject_parameters(name, params);
    return flat_geometry();
  }
  if (name == "polar-flat") {
    reject_parameters(name, params);
    return polar_flat_geometry();
  }
  if (name == "sphere2") {
    reject_parameters(name, params);
    return sphere2_geometry();
  }
  if (name == "torsion-const") {
    double kappa = 0.3;
    for (const auto& [key, value] : params) {
      if (key != "kappa") throw ConfigError("torsion-const has no parameter '" + key + "'");
      kappa = value;
    }
    if (!std::isfinite(kappa) || std::abs(kappa) > 10.0)
      throw ConfigError("torsion-const kappa must be finite with |kappa| <= 10");
    return torsion_const_geometry(kappa);
  }
  throw ConfigError("unknown geometry '" + name + "'");
}

const PathSpec& find_path(const Geometry& geometry, const std::string& path_name) {
  for (const auto& p : geometry.paths)
    if (p.name == path_name) return p.spec;
  throw ConfigError("geometry '" + geometry.name + "' has no path named '" + path_name + "'");
}

}  // namespace pathframes
