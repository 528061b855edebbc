// Command-line front end: run scenarios, inspect the registry, run the
// acceptance suite.
//
// Exit codes: 0 all checks pass, 1 a verdict failed, 2 bad config or
// usage, 3 a construction stage failed.

#include "pathframes/acceptance.hpp"
#include "pathframes/errors.hpp"
#include "pathframes/registry.hpp"
#include "pathframes/report.hpp"
#include "pathframes/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace pf = pathframes;

namespace {

constexpr int kVerdictFailure = 1;
constexpr int kConfigError = 2;
constexpr int kConstructionError = 3;

void apply_tolerance(pf::Tolerances& t, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw pf::ConfigError("--tolerance expects KEY=VALUE, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const double value = pf::parse_number_expression(assignment.substr(eq + 1));
  if (!(value > 0.0)) throw pf::ConfigError("--tolerance " + key + " must be positive");
  double* slot = key == "residual"     ? &t.residual
                 : key == "constancy"  ? &t.constancy
                 : key == "all_fields" ? &t.all_fields
                 : key == "jacobian"   ? &t.jacobian
                 : key == "holonomic"  ? &t.holonomic
                 : key == "torsion"    ? &t.torsion
                 : key == "angle"      ? &t.angle
                                       : nullptr;
  if (!slot) throw pf::ConfigError("unknown tolerance '" + key + "'");
  *slot = value;
}

int run_command(const std::string& config, const std::string& out_dir, std::optional<int> grid,
                const std::vector<std::string>& tolerances) {
  pf::Scenario sc = pf::load_scenario(config);
  if (grid) {
    if (*grid < 5) throw pf::ConfigError("--grid must be at least 5");
    sc.grid_size = *grid;
    sc.steps_per_unit.reset();
  }
  for (const auto& t : tolerances) apply_tolerance(sc.tolerances, t);

  const pf::RunReport report = pf::run_scenario(sc);
  const auto files = pf::write_report(report, out_dir);

  std::printf("scenario %s: %s on %s, %zu grid nodes\n", sc.name.c_str(), sc.geometry.c_str(),
              sc.path_preset.empty() ? sc.path.type().c_str() : sc.path_preset.c_str(),
              report.provenance.grid_nodes);
  for (const auto& c : report.checks)
    std::printf("  %-8s %-28s value %-12.4g tolerance %-10.3g %s\n", pf::to_string(c.status), c.name.c_str(),
                c.value, c.tolerance, c.note.c_str());
  std::printf("  holonomy %s, torsion %s (max %.4g)\n",
              report.holonomy ? pf::to_string(*report.holonomy) : "not evaluated",
              report.torsion_free ? "free" : "present", report.max_torsion);
  if (report.holonomy_angle) std::printf("  holonomy angle %.12f\n", *report.holonomy_angle);
  for (const auto& f : files) std::printf("  wrote %s\n", f.string().c_str());
  std::printf("%s\n", report.passed() ? "PASS" : "FAIL");
  return report.passed() ? 0 : kVerdictFailure;
}

int list_command() {
  for (const auto& name : pf::list_geometries()) {
    const auto d = pf::describe(name);
    std::printf("%-14s %s\n", name.c_str(), d.summary.c_str());
  }
  return 0;
}

int describe_command(const std::string& name) {
  const auto d = pf::describe(name);
  std::printf("%s: %s\n", d.name.c_str(), d.summary.c_str());
  std::printf("coordinates:");
  for (const auto& c : d.coordinates) std::printf(" %s", c.c_str());
  std::printf("\nconnection coefficients:\n");
  for (const auto& c : d.coefficients) std::printf("  %s\n", c.c_str());
  if (!d.parameters.empty()) {
    std::printf("parameters (defaults):\n");
    for (const auto& [key, value] : d.parameters) std::printf("  %s = %g\n", key.c_str(), value);
  }
  std::printf("paths:\n");
  for (const auto& p : d.paths) std::printf("  %s\n", p.c_str());
  return 0;
}

int verify_command(double steps_per_unit) {
  pf::AcceptanceOptions options;
  options.steps_per_unit = steps_per_unit;
  const auto results = pf::run_acceptance(options);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s\n", pf::format_result(r).c_str());
    failed += r.passed ? 0 : 1;
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : kVerdictFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frames with vanishing connection components along paths"};
  app.require_subcommand(1);

  std::string config, out_dir = ".";
  std::optional<int> grid;
  std::vector<std::string> tolerances;
  auto* run = app.add_subcommand("run", "Run a scenario config and write its report");
  run->add_option("config", config, "Scenario JSON file")->required();
  run->add_option("-o,--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("-g,--grid", grid, "Override the grid with this many nodes");
  run->add_option("-t,--tolerance", tolerances,
                  "Override a tolerance, KEY=VALUE with KEY one of residual, constancy, all_fields, "
                  "jacobian, holonomic, torsion, angle")
      ->take_all();

  auto* list = app.add_subcommand("list", "List built-in geometries");

  std::string name;
  auto* describe = app.add_subcommand("describe", "Describe a built-in geometry");
  describe->add_option("geometry", name, "Geometry name")->required();

  double steps_per_unit = 2000.0;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--steps-per-unit", steps_per_unit, "Grid density")->capture_default_str()->check(
      CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run) return run_command(config, out_dir, grid, tolerances);
    if (*list) return list_command();
    if (*describe) return describe_command(name);
    if (*verify) return verify_command(steps_per_unit);
  } catch (const pf::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const pf::Error& e) {
    std::fprintf(stderr, "construction error: %s\n", e.what());
    return kConstructionError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConstructionError;
  }
  return kConfigError;
}
