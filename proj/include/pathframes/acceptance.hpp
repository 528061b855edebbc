#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pathframes {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// The measured quantity and the bound it was held to.
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  double steps_per_unit = 2000.0;
  std::uint64_t seed = 20240601;
};

/// Runs the eleven acceptance criteria in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// One line: "[PASS] 3 sphere-holonomy: value ... (bound ...) detail".
std::string format_result(const CriterionResult& result);

}  // namespace pathframes
