#pragma once

#include <nlohmann/json.hpp>

#include <vector>

namespace degdiff {

/// Logarithmically spaced sample points on [s_min, s_max].
struct LogGrid {
  double s_min = 1e-8;
  double s_max = 1.0;
  int points_per_decade = 10;

  std::vector<double> points() const;
  LogGrid refined() const;  ///< double density, same range
};

/// Sample points for structural-assumption checks: log spaced on
/// [s_min, s_split) where degeneracy lives, linear on [s_split, s_max].
struct AssumptionGrid {
  double s_min = 1e-8;
  double s_split = 0.1;
  double s_max = 10.0;
  int log_points_per_decade = 10;
  int linear_points = 100;

  std::vector<double> points() const;
  /// Doubles both densities and pushes both ends one decade outward
  /// (only the lower end when `bounded`).
  AssumptionGrid refined(bool bounded) const;
  /// Same densities with s_max (and s_split if needed) clipped to `upper`.
  AssumptionGrid clipped(double upper) const;
};

void to_json(nlohmann::json& j, const LogGrid& g);
void from_json(const nlohmann::json& j, LogGrid& g);
void to_json(nlohmann::json& j, const AssumptionGrid& g);
void from_json(const nlohmann::json& j, AssumptionGrid& g);

}  // namespace degdiff
