#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "substatic/config.hpp"

namespace substatic {

enum class Verb { check_model, solve, verify, sweep };

Verb verb_from_string(const std::string& name);

struct CliOptions {
  std::optional<std::string> out_dir;  // overrides the config's `out`
  std::optional<double> tolerance;     // overrides the config's `tol`
  bool json = true;
  bool csv = false;
};

struct Verdict {
  std::string name;
  bool ok = false;
};

struct Outcome {
  nlohmann::json report;
  std::vector<Verdict> verdicts;
  std::vector<std::string> warnings;
  std::vector<std::string> written;  // output files
  std::string csv;                   // the CSV produced by the verb, if any
  std::string solution_csv;          // solve, radial: nodal solution table

  bool all_passed() const;
};

/// Runs one verb on a parsed configuration. Throws Error on execution failures.
Outcome execute(Verb verb, const RunConfig& config, const CliOptions& options);

/// Loads the config, executes, writes outputs and prints a summary.
/// Returns 0 when every verdict passes, 2 on a failed verdict, 1 on any error.
int run(Verb verb, const std::string& config_path, const CliOptions& options, std::ostream& out,
        std::ostream& err);

}  // namespace substatic
