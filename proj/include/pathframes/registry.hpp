#pragma once

#include "pathframes/derivations.hpp"
#include "pathframes/geometry.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>

namespace pathframes {

struct LinePath {
  Vector from;
  Vector to;
};

struct CirclePath {
  Vector center;
  double radius = 1.0;
};

/// gamma(s) = base + s e_axis.
struct CoordinateLinePath {
  Vector base;
  int axis = 0;
};

/// Two-dimensional charts only: gamma(s) = (theta0, s).
struct LatitudePath {
  double theta0 = 0.0;
};

struct PathSpec {
  std::variant<LinePath, CirclePath, CoordinateLinePath, LatitudePath> shape;
  double s_start = 0.0;
  double s_end = 1.0;

  std::string type() const;
  PathCurve build(int grid_size) const;
};

struct NamedPath {
  std::string name;
  PathSpec spec;
};

struct Geometry {
  std::string name;
  ChartDomain chart;
  ConnectionField connection;
  /// Metric used only to report holonomy angles on closed loops.
  std::optional<MatrixField> metric;
  /// Period of each coordinate, 0 for non-periodic ones.
  Vector periods;
  std::map<std::string, double> parameters;
  std::vector<NamedPath> paths;
};

struct GeometryDescription {
  std::string name;
  std::string summary;
  std::vector<std::string> coordinates;
  std::vector<std::string> coefficients;
  std::map<std::string, double> parameters;  // defaults
  std::vector<std::string> paths;
};

/// Registered geometry names in a fixed order.
std::vector<std::string> list_geometries();

/// Throws ConfigError for unknown names.
GeometryDescription describe(const std::string& name);

/// Throws ConfigError for unknown names or parameters out of range.
Geometry make_geometry(const std::string& name, const std::map<std::string, double>& params = {});

/// Throws ConfigError if the geometry has no path by that name.
const PathSpec& find_path(const Geometry& geometry, const std::string& path_name);

}  // namespace pathframes
