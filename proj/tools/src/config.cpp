#include "config.hpp"

#include <cmath>

namespace degdiff::cli {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> messages)
    : Error("invalid config: " + join(messages)), messages_(std::move(messages)) {}

bool Collector::require(const json& j, std::initializer_list<const char*> keys,
                        const std::string& path) {
  if (!j.is_object()) {
    errors_.push_back(path + " must be an object");
    return false;
  }
  bool all = true;
  for (const char* k : keys) {
    if (!j.contains(k)) {
      errors_.push_back("missing field '" + (path.empty() ? std::string(k) : path + "." + k) + "'");
      all = false;
    }
  }
  return all;
}

void Collector::finish() const {
  if (!errors_.empty()) throw ConfigError(errors_);
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ParameterError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

int integer_or(const json& j, const char* key, int fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer())
    throw ParameterError(std::string("field '") + key + "' must be an integer");
  return j.at(key).get<int>();
}

bool flag_or(const json& j, const char* key, bool fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ParameterError(std::string("field '") + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

std::vector<double> parse_output_times(const json& spec, double t_end) {
  if (!(t_end > 0.0)) throw ParameterError("t_end must be positive");
  std::vector<double> out;
  if (spec.is_array()) {
    for (const json& t : spec) {
      if (!t.is_number()) throw ParameterError("output_times must hold numbers");
      out.push_back(t.get<double>());
    }
    return out;
  }
  const json obj = spec.is_object() ? spec : json::object();
  if (!spec.is_null() && !spec.is_object())
    throw ParameterError("output_times must be an array or an object");
  const int count = integer_or(obj, "count", 20);
  if (count < 1) throw ParameterError("output_times.count must be >= 1");
  const std::string spacing = obj.value("spacing", std::string("uniform"));
  if (spacing == "uniform") {
    for (int i = 1; i <= count; ++i) out.push_back(t_end * i / count);
  } else if (spacing == "log") {
    const double t_min = number_or(obj, "t_min", t_end * 1e-3);
    if (!(t_min > 0.0 && t_min < t_end)) throw ParameterError("output_times.t_min must lie in (0, t_end)");
    for (int i = 0; i < count; ++i)
      out.push_back(count == 1 ? t_end : t_min * std::pow(t_end / t_min, double(i) / (count - 1)));
    out.back() = t_end;
  } else {
    throw ParameterError("output_times.spacing must be 'uniform' or 'log'");
  }
  return out;
}

}  // namespace degdiff::cli
