#pragma once

#include "pathframes/coordinate_extension.hpp"
#include "pathframes/registry.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace pathframes {

struct Tolerances {
  double residual = 1e-8;     // max |W'|_inf of the along-path frame
  double constancy = 1e-7;    // max |d(A1^{-1} A2)/ds|_inf
  double all_fields = 5e-6;   // all-fields frame residual on the path
  double jacobian = 5e-6;     // coordinate extension vs frame
  double holonomic = 1e-5;    // commutator norm
  double torsion = 1e-6;      // torsion norm (sum of |T^i_{kl}|)
  double angle = 1e-6;        // expected holonomy angle
};

struct OutputOptions {
  bool csv = true;
  bool summary = true;
  /// Every row_stride-th grid node is written; the last node always is.
  int row_stride = 1;
};

struct Expectations {
  std::optional<HolonomyVerdict> holonomy;
  std::optional<double> holonomy_angle;
};

/// A validated run configuration. Geometry and path are resolved against
/// the registry when the scenario is parsed.
struct Scenario {
  std::string name = "scenario";
  std::string geometry;
  std::map<std::string, double> parameters;
  /// Registry path name, empty for an inline path.
  std::string path_preset;
  PathSpec path;
  /// Exactly one of the two is set.
  std::optional<double> steps_per_unit;
  std::optional<int> grid_size;
  /// Defaults to the start of the path.
  std::optional<double> s0;
  std::optional<Matrix> initial_frame;
  std::uint64_t seed = 0;
  std::optional<double> tube_radius;
  double transverse_step = 1e-4;
  double ivp_steps_per_unit = 2000.0;
  Tolerances tolerances;
  Expectations expect;
  OutputOptions outputs;
};

/// Parses a JSON scenario. Unknown keys, missing required keys and values
/// out of range raise ConfigError. Numbers may be given as strings such as
/// "pi/3" or "-2*pi".
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& file);

/// Normalized JSON form: every field spelled out, numbers as doubles.
/// parse_scenario(to_json(s)) reproduces s.
std::string to_json(const Scenario& scenario);

/// Evaluates the numeric expressions accepted in configs.
double parse_number_expression(const std::string& text);

}  // namespace pathframes
