#pragma once

#include <string>
#include <vector>

namespace degdiff::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Static line plot with axes, ticks and a legend. Nonpositive values are
/// dropped on log axes.
std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace degdiff::cli
