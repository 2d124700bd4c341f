#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace degdiff {

enum class Verdict { satisfied, violated, inconclusive };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view s);

/// A sample point at which the defining inequality of a condition fails.
///
/// `value` is the witnessed quantity evaluated at `s` (and `v` for two-point
/// conditions); the violation is `value > bound` when `exceeds` is true and
/// `value < bound` otherwise.
struct Witness {
  double s = 0.0;
  std::optional<double> v;
  double value = 0.0;
  double bound = 0.0;
  bool exceeds = true;

  bool violates() const { return exceeds ? value > bound : value < bound; }
};

struct ConditionReport {
  std::string condition;
  Verdict verdict = Verdict::inconclusive;
  std::map<std::string, double> constants;
  std::optional<Witness> witness;
  nlohmann::json grid;  ///< sampling spec, so the verdict is reproducible
  std::string note;
};

void to_json(nlohmann::json& j, const Witness& w);
void from_json(const nlohmann::json& j, Witness& w);
void to_json(nlohmann::json& j, const ConditionReport& r);
void from_json(const nlohmann::json& j, ConditionReport& r);

}  // namespace degdiff
