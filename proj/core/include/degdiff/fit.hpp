#pragma once

#include <span>

namespace degdiff {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y ≈ slope·x + intercept.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace degdiff
