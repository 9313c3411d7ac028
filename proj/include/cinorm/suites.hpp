#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cinorm/norms.hpp"

namespace cinorm {

/// Parameters shared by every subcommand. `threads` and `out` never appear
/// in reports, so reruns with a different thread count or destination stay
/// byte-identical.
struct ExperimentConfig {
  std::string group;
  std::string k;  // element list
  std::string h;  // subgroup generators
  std::string norm = "support";
  std::string element;
  std::string pattern;
  std::optional<std::string> defect_upper;
  std::size_t m = 1;
  std::size_t n = 64;
  std::size_t n_max = 16;
  std::uint64_t seed = 0;
  std::size_t budget = 1000;
  std::string out;
  std::string format = "json";
  unsigned threads = 1;
  std::size_t guard = kDefaultGuard;
  /// Half-width or radius of the element window on infinite groups.
  std::size_t window = kDefaultWindow;
};

/// Rejects unknown keys and wrongly typed values with InvalidInput.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_echo(const ExperimentConfig& c);

struct CheckResult {
  std::string name;
  bool passed = true;
  nlohmann::json detail = nlohmann::json::object();
  /// Literal-syntax elements reproducing the first failure.
  std::string witness;
  double seconds = 0;
};

struct SuiteReport {
  std::string suite;
  bool passed = true;
  std::vector<CheckResult> checks;  // sorted by name
};

std::vector<std::string> suite_names();
/// Throws InvalidInput for an unknown suite and GuardExceeded when a
/// search budget trips.
SuiteReport run_suite(const std::string& name, const ExperimentConfig& config);

/// Deterministic: tool version, suite, config echo, checks. No timings.
nlohmann::json suite_report_json(const SuiteReport& report, const ExperimentConfig& config);
/// Wall-clock seconds per check, kept apart from the report.
nlohmann::json suite_timing_json(const SuiteReport& report);

}  // namespace cinorm
