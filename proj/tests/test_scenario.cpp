#include "pathframes/errors.hpp"
#include "pathframes/report.hpp"
#include "pathframes/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

namespace pathframes {
namespace {

const char* kSphere = R"({
  "name": "sphere",
  "geometry": "sphere2",
  "path": {"type": "latitude", "theta0": "pi/3", "s_start": 0, "s_end": "2*pi"},
  "grid": {"steps_per_unit": 500},
  "seed": 11,
  "expect": {"holonomy": "holonomic", "holonomy_angle": "pi"}
})";

TEST(NumberExpressionTest, AcceptsMultiplesOfPi) {
  EXPECT_DOUBLE_EQ(parse_number_expression("pi/3"), M_PI / 3);
  EXPECT_DOUBLE_EQ(parse_number_expression("-2*pi"), -2 * M_PI);
  EXPECT_DOUBLE_EQ(parse_number_expression(" 1.5 * pi "), 1.5 * M_PI);
  EXPECT_DOUBLE_EQ(parse_number_expression("1e-3"), 1e-3);
  EXPECT_THROW(parse_number_expression("tau"), ConfigError);
  EXPECT_THROW(parse_number_expression("pi+1"), ConfigError);
  EXPECT_THROW(parse_number_expression("1/0"), ConfigError);
}

TEST(ScenarioParseTest, PresetAndInlinePaths) {
  const auto sc = parse_scenario(kSphere);
  EXPECT_EQ(sc.geometry, "sphere2");
  EXPECT_TRUE(sc.path_preset.empty());
  EXPECT_EQ(sc.path.type(), "latitude");
  EXPECT_DOUBLE_EQ(sc.path.s_end, 2 * M_PI);
  EXPECT_EQ(sc.seed, 11u);
  ASSERT_TRUE(sc.expect.holonomy_angle);
  EXPECT_DOUBLE_EQ(*sc.expect.holonomy_angle, M_PI);

  const auto preset = parse_scenario(
      R"({"geometry": {"name": "torsion-const", "parameters": {"kappa": 0.5}}, "path": "arc",
          "grid": {"grid_size": 101}, "seed": 0})");
  EXPECT_EQ(preset.path_preset, "arc");
  EXPECT_EQ(preset.parameters.at("kappa"), 0.5);
  EXPECT_EQ(*preset.grid_size, 101);
}

TEST(ScenarioParseTest, FailsClosed) {
  const std::string base = R"("geometry": "flat", "path": "line", "grid": {"grid_size": 11})";
  for (const std::string& bad : std::vector<std::string>{
           "{" + base + "}",                                             // no seed
           "{" + base + R"(, "seed": 1, "extra": 1})",                    // unknown key
           "{" + base + R"(, "seed": 1, "tolerances": {"residul": 1}})",  // misspelled nested key
           R"({"geometry": "flat", "path": "line", "grid": {}, "seed": 1})",
           R"({"geometry": "flat", "path": "line", "grid": {"grid_size": 11, "steps_per_unit": 5}, "seed": 1})",
           R"({"geometry": "cone", "path": "line", "grid": {"grid_size": 11}, "seed": 1})",
           R"({"geometry": "flat", "path": "spiral", "grid": {"grid_size": 11}, "seed": 1})",
           "{" + base + R"(, "seed": -1})",
           "{" + base + R"(, "seed": 1, "s0": 7})",
           "{" + base + R"(, "seed": 1, "initial_frame": [[1, 1], [1, 1]]})",
           "{" + base + R"(, "seed": 1, "initial_frame": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})",
           "{" + base + R"(, "seed": 1, "expect": {"holonomy": "sometimes"}})",
           R"({"geometry": "sphere2", "path": {"type": "line", "from": [1, 0, 0], "to": [1, 1, 0],
               "s_start": 0, "s_end": 1}, "grid": {"grid_size": 11}, "seed": 1})",
           R"({"geometry": "flat", "path": {"type": "line", "from": [0, 0], "to": [1, 1], "s_start": 1,
               "s_end": 0}, "grid": {"grid_size": 11}, "seed": 1})",
           "not json",
       })
    EXPECT_THROW(parse_scenario(bad), ConfigError) << bad;
}

TEST(ScenarioParseTest, NormalizedFormRoundTrips) {
  for (const char* text : {kSphere, R"({"geometry": "polar-flat", "path": "circle", "grid": {"grid_size": 65},
                                       "s0": "pi", "seed": 3, "tube": {"radius": 0.1},
                                       "initial_frame": [[1, 0.5], [0, 2]], "outputs": {"row_stride": 4}})"}) {
    const auto first = parse_scenario(text);
    const std::string normalized = to_json(first);
    const auto second = parse_scenario(normalized);
    EXPECT_EQ(to_json(second), normalized);
    EXPECT_EQ(second.path.s_end, first.path.s_end);
    EXPECT_EQ(second.seed, first.seed);
  }
}

TEST(RunScenarioTest, FlatLineIsExact) {
  const auto report = run_scenario(
      parse_scenario(R"({"geometry": "flat", "path": "line", "grid": {"grid_size": 201}, "seed": 1})"));
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.exit_code(), 0);
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.residual, 0.0);
    EXPECT_LT(row.commutator, 1e-12);
    EXPECT_EQ(row.torsion, 0.0);
  }
  ASSERT_TRUE(report.holonomy);
  EXPECT_EQ(*report.holonomy, HolonomyVerdict::Holonomic);
  EXPECT_FALSE(report.holonomy_angle);
}

TEST(RunScenarioTest, SphereLatitudeReportsDeficitAngle) {
  const auto report = run_scenario(parse_scenario(kSphere));
  EXPECT_TRUE(report.passed());
  ASSERT_TRUE(report.holonomy_angle);
  EXPECT_NEAR(*report.holonomy_angle, M_PI, 1e-6);
  EXPECT_EQ(*report.holonomy, HolonomyVerdict::Holonomic);
}

TEST(RunScenarioTest, TorsionIsAnholonomic) {
  const auto report = run_scenario(parse_scenario(
      R"({"geometry": {"name": "torsion-const", "parameters": {"kappa": 0.3}}, "path": "line",
          "grid": {"steps_per_unit": 500}, "seed": 2})"));
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(*report.holonomy, HolonomyVerdict::Anholonomic);
  EXPECT_FALSE(report.torsion_free);
  EXPECT_NEAR(report.max_commutator, 0.3, 1e-6);
}

TEST(RunScenarioTest, WrongExpectationFails) {
  const auto report = run_scenario(parse_scenario(
      R"({"geometry": "torsion-const", "path": "line", "grid": {"grid_size": 101}, "seed": 2,
          "expect": {"holonomy": "holonomic"}})"));
  EXPECT_FALSE(report.passed());
  EXPECT_EQ(report.exit_code(), 1);
}

TEST(RunScenarioTest, SelfIntersectingLoopSkipsTubeStages) {
  const auto report = run_scenario(parse_scenario(
      R"({"geometry": "flat", "path": {"type": "circle", "center": [0, 0], "radius": 1, "s_start": 0,
          "s_end": "2*pi"}, "grid": {"grid_size": 801}, "seed": 1})"));
  EXPECT_TRUE(report.passed());
  EXPECT_FALSE(report.holonomy);
  int skipped = 0;
  for (const auto& c : report.checks) skipped += c.status == CheckStatus::Skipped;
  EXPECT_EQ(skipped, 6);
  ASSERT_TRUE(report.holonomy_angle);
  EXPECT_LT(std::min(*report.holonomy_angle, 2 * M_PI - *report.holonomy_angle), 1e-9);
  EXPECT_TRUE(std::isnan(report.rows.front().commutator));
}

TEST(RunScenarioTest, StageFailuresCarryStageName) {
  const auto sc = parse_scenario(
      R"({"geometry": "sphere2", "path": {"type": "latitude", "theta0": 0.05, "s_start": 0, "s_end": 1},
          "grid": {"grid_size": 101}, "seed": 1})");
  try {
    run_scenario(sc);
    FAIL() << "expected a construction error";
  } catch (const ConstructionError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("[torsion]", 0), 0u) << e.what();
  }
}

TEST(RunScenarioTest, PathOutsideChartIsConfigError) {
  EXPECT_THROW(run_scenario(parse_scenario(
                   R"({"geometry": "flat", "path": {"type": "line", "from": [0, 0], "to": [20, 0], "s_start": 0,
                       "s_end": 1}, "grid": {"grid_size": 11}, "seed": 1})")),
               ConfigError);
  EXPECT_THROW(run_scenario(parse_scenario(
                   R"({"geometry": "flat", "path": "line", "grid": {"grid_size": 11}, "s0": 0.55, "seed": 1})")),
               ConfigError);
}

TEST(ReportTest, CsvLayoutAndDeterminism) {
  const auto sc = parse_scenario(
      R"({"geometry": "polar-flat", "path": "line", "grid": {"grid_size": 41}, "seed": 9,
          "outputs": {"row_stride": 7}})");
  const auto first = run_scenario(sc);
  const auto second = run_scenario(sc);
  EXPECT_EQ(first.csv(), second.csv());
  EXPECT_EQ(first.summary_json(), second.summary_json());

  std::istringstream in(first.csv());
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header, "s,a_1_1,a_1_2,a_2_1,a_2_2,residual,commutator_norm,torsion_norm");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 7);  // nodes 0, 7, ..., 35 and the last one
  EXPECT_NE(first.summary_json().find(first.provenance.config_hash), std::string::npos);
}

TEST(ReportTest, SummaryVerdictsFollowRows) {
  const auto report = run_scenario(parse_scenario(
      R"({"geometry": "sphere2", "path": "latitude-arc", "grid": {"grid_size": 401}, "seed": 4})"));
  double residual = 0.0, commutator = 0.0, torsion = 0.0;
  for (const auto& r : report.rows) {
    residual = std::max(residual, r.residual);
    commutator = std::max(commutator, r.commutator);
    torsion = std::max(torsion, r.torsion);
  }
  EXPECT_EQ(report.checks.front().value, residual);
  EXPECT_EQ(report.max_commutator, commutator);
  EXPECT_EQ(report.max_torsion, torsion);
}

TEST(ReportTest, Fnv1a) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

}  // namespace
}  // namespace pathframes
