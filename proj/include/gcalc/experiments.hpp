#pragma once

// Named experiments behind the command-line driver and the acceptance sweep.

#include <cstdint>
#include <string>
#include <vector>

#include "gcalc/config.hpp"
#include "json.hpp"

namespace gcalc {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;    // one line
  nlohmann::json details;
  double seconds = 0.0;
  double time_limit = 0.0;
};

struct AcceptanceOptions {
  unsigned threads = 0;
  std::uint64_t seed = 1;
};

/// Criteria 1..11. Exceptions are caught and reported as failures.
CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {}, std::vector<int> ids = {});
std::string criterion_line(const CriterionResult& r);
nlohmann::json to_json(const CriterionResult& r);

struct CommandResult {
  nlohmann::json report;
  /// 0 ok, 2 a check inside the command failed.
  int exit_code = 0;
  /// CSV rendering, when the command has a tabular form.
  std::string csv;
};

/// Runs c.command. Domain and parse errors propagate as gcalc::Error.
CommandResult run_command(const ExperimentConfig& c);

/// Names accepted by run_command.
const std::vector<std::string>& command_names();

/// Fills command-specific defaults for fields left empty (mesh, cochain, f).
ExperimentConfig with_command_defaults(ExperimentConfig c);

}  // namespace gcalc
