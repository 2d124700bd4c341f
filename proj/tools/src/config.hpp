#pragma once

#include "degdiff/errors.hpp"
#include "degdiff/serialization.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace degdiff::cli {

using json = nlohmann::json;

/// Config validation failure carrying every problem found.
class ConfigError : public Error {
public:
  explicit ConfigError(std::vector<std::string> messages);
  const std::vector<std::string>& messages() const { return messages_; }

private:
  std::vector<std::string> messages_;
};

/// Accumulates validation messages so one run reports all of them.
class Collector {
public:
  /// Records each key of `keys` missing from `j` (at `path`); true if all present.
  bool require(const json& j, std::initializer_list<const char*> keys, const std::string& path);

  /// Runs `parse`, turning library and JSON errors into messages prefixed by `what`.
  template <class F>
  auto attempt(const std::string& what, F&& parse) -> std::optional<decltype(parse())> {
    try {
      return parse();
    } catch (const Error& e) {
      errors_.push_back(what + ": " + e.what());
    } catch (const json::exception& e) {
      errors_.push_back(what + ": " + e.what());
    }
    return std::nullopt;
  }

  void add(std::string message) { errors_.push_back(std::move(message)); }
  bool ok() const { return errors_.empty(); }
  /// Throws ConfigError when any message was recorded.
  void finish() const;

private:
  std::vector<std::string> errors_;
};

double number_or(const json& j, const char* key, double fallback);
int integer_or(const json& j, const char* key, int fallback);
bool flag_or(const json& j, const char* key, bool fallback);

/// Output times from an array or {"count": n, "spacing": "uniform" | "log", "t_min": t}.
std::vector<double> parse_output_times(const json& spec, double t_end);

}  // namespace degdiff::cli
