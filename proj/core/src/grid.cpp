#include "degdiff/grid.hpp"

#include "degdiff/errors.hpp"

#include <algorithm>
#include <cmath>

namespace degdiff {

std::vector<double> LogGrid::points() const {
  if (!(s_min > 0.0) || !(s_max > s_min) || points_per_decade < 1)
    throw DomainError("log grid needs 0 < s_min < s_max and points_per_decade >= 1");
  const double decades = std::log10(s_max / s_min);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)) + 1);
  std::vector<double> s(n);
  const double lo = std::log10(s_min);
  const double step = decades / (n - 1);
  for (int i = 0; i < n; ++i) s[i] = std::pow(10.0, lo + step * i);
  s.front() = s_min;
  s.back() = s_max;
  return s;
}

LogGrid LogGrid::refined() const { return {s_min, s_max, 2 * points_per_decade}; }

std::vector<double> AssumptionGrid::points() const {
  if (!(s_min > 0.0) || !(s_split > s_min) || !(s_max >= s_split))
    throw DomainError("assumption grid needs 0 < s_min < s_split <= s_max");
  std::vector<double> s = LogGrid{s_min, s_split, log_points_per_decade}.points();
  s.pop_back();
  const int n = std::max(linear_points, 2);
  for (int i = 0; i < n; ++i) s.push_back(s_split + (s_max - s_split) * i / (n - 1));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

AssumptionGrid AssumptionGrid::refined(bool bounded) const {
  AssumptionGrid g = *this;
  g.s_min = s_min / 10.0;
  if (!bounded) g.s_max = s_max * 10.0;
  g.log_points_per_decade = 2 * log_points_per_decade;
  g.linear_points = 2 * linear_points * (bounded ? 1 : 10);
  return g;
}

AssumptionGrid AssumptionGrid::clipped(double upper) const {
  AssumptionGrid g = *this;
  g.s_max = upper;
  if (g.s_split >= upper) g.s_split = upper / 2.0;
  if (g.s_min >= g.s_split) g.s_min = g.s_split / 1e6;
  return g;
}

void to_json(nlohmann::json& j, const LogGrid& g) {
  j = {{"s_min", g.s_min}, {"s_max", g.s_max}, {"points_per_decade", g.points_per_decade}};
}

void from_json(const nlohmann::json& j, LogGrid& g) {
  g.s_min = j.value("s_min", g.s_min);
  g.s_max = j.value("s_max", g.s_max);
  g.points_per_decade = j.value("points_per_decade", g.points_per_decade);
}

void to_json(nlohmann::json& j, const AssumptionGrid& g) {
  j = {{"s_min", g.s_min},
       {"s_split", g.s_split},
       {"s_max", g.s_max},
       {"log_points_per_decade", g.log_points_per_decade},
       {"linear_points", g.linear_points}};
}

void from_json(const nlohmann::json& j, AssumptionGrid& g) {
  g.s_min = j.value("s_min", g.s_min);
  g.s_split = j.value("s_split", g.s_split);
  g.s_max = j.value("s_max", g.s_max);
  g.log_points_per_decade = j.value("log_points_per_decade", g.log_points_per_decade);
  g.linear_points = j.value("linear_points", g.linear_points);
}

}  // namespace degdiff
