#pragma once

#include <functional>
#include <span>
#include <vector>

namespace degdiff::quad {

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  long evaluations = 0;
};

using Integrand = std::function<double(double)>;

/// Adaptive Simpson on [lo, hi] to relative accuracy `rel_tol`.
///
/// The interval is first cut into `initial_panels` panels to get a magnitude
/// estimate; each panel is then refined recursively with a local absolute
/// tolerance derived from that estimate. The Richardson-corrected value is
/// returned with the accumulated |S2 - S1|/15 as error estimate.
Result adaptive_simpson(const Integrand& f, double lo, double hi, double rel_tol,
                        int initial_panels = 16, int max_depth = 48);

/// Same, but splits at the given interior breakpoints (those outside (lo, hi)
/// are ignored).
Result adaptive_simpson_split(const Integrand& f, double lo, double hi,
                              std::span<const double> breakpoints, double rel_tol);

/// ∫_lo^∞ f(x) dx by integrating panels [lo+2^{j-1}-1, lo+2^j-1] of doubling
/// width until a panel contributes less than rel_tol of the running total.
/// Throws DivergenceError (with the partial sum) after `max_doublings` panels.
Result semi_infinite(const Integrand& f, double lo, double rel_tol,
                     std::span<const double> breakpoints = {}, int max_doublings = 60);

/// Composite trapezoid rule over sampled values on a (possibly nonuniform) grid.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace degdiff::quad
