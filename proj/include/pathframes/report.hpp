#pragma once

#include "pathframes/coordinate_extension.hpp"
#include "pathframes/scenario.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pathframes {

struct ReportRow {
  double s = 0.0;
  Matrix frame;
  double residual = 0.0;
  /// NaN when the tube stages were skipped.
  double commutator = 0.0;
  double torsion = 0.0;
};

enum class CheckStatus { Pass, Fail, Skipped };

const char* to_string(CheckStatus status);

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  double value = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct Provenance {
  std::string config_hash;  // FNV-1a of the normalized config, hex
  std::size_t grid_nodes = 0;
  double grid_spacing = 0.0;
  double ivp_steps_per_unit = 0.0;
  double fd_step = 0.0;
  double transverse_step = 0.0;
  double tube_radius = 0.0;
  std::uint64_t seed = 0;
};

struct RunReport {
  Scenario scenario;
  std::vector<ReportRow> rows;  // every grid node
  std::vector<Check> checks;
  std::optional<HolonomyVerdict> holonomy;
  double max_commutator = 0.0;
  bool torsion_free = false;
  double max_torsion = 0.0;
  std::optional<double> holonomy_angle;
  Provenance provenance;

  bool passed() const;
  /// 0 when every check passes or is skipped, 1 otherwise.
  int exit_code() const;

  /// Rows with the fixed column order s, a_1_1 ... a_n_n, residual,
  /// commutator_norm, torsion_norm, thinned by outputs.row_stride.
  std::string csv() const;
  std::string summary_json() const;
};

/// Runs the pipeline: along-path frame and its residual, transition
/// constancy against a seeded random second frame, all-fields frame on a
/// tube, holonomicity, coordinate extension, torsion and the holonomy
/// angle on closed loops. Stages needing an injective tube are skipped when
/// the tube cannot be built. Failures inside a stage are rethrown as
/// ConstructionError prefixed with the stage name.
RunReport run_scenario(const Scenario& scenario);

/// Writes <name>.csv and <name>.summary.json as requested by the outputs block.
std::vector<std::filesystem::path> write_report(const RunReport& report,
                                                const std::filesystem::path& directory);

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace pathframes
