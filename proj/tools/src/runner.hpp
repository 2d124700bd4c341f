#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace degdiff::cli {

using json = nlohmann::json;

enum class Kind { analyze_coefficient, solve, front, stability, counterexample, sweep };

std::string_view to_string(Kind k);
std::optional<Kind> kind_from_string(std::string_view s);
const std::vector<Kind>& all_kinds();

enum ExitCode : int {
  exit_ok = 0,
  exit_validation = 2,
  exit_runtime = 3,
  exit_check_failed = 4,
};

struct RunOptions {
  std::filesystem::path out_dir = "degdiff-out";
  std::optional<std::uint64_t> seed;  ///< overrides the config's "seed"
  bool quiet = false;
  bool write_files = true;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Outcome {
  int exit_code = exit_ok;
  json results;                              ///< content of results.json
  std::vector<Check> checks;
  std::map<std::string, std::string> files;  ///< extra artifacts by file name
};

/// Validates `config`, runs the experiment and, unless disabled, writes
/// results.json plus its CSV and SVG artifacts into the output directory
/// (error.json instead when validation or the run fails).
/// Validation problems yield exit_validation with an error report in
/// `results`; module errors yield exit_runtime; failed checks exit_check_failed.
Outcome run(Kind kind, const json& config, const RunOptions& options);

/// Parses a JSON config file; throws ConfigError when unreadable or malformed.
json load_config(const std::filesystem::path& path);

/// Schemas shipped with the tool, keyed by name (e.g. "results/solve").
const std::map<std::string, std::string>& schemas();

}  // namespace degdiff::cli
