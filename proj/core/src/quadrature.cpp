#include "degdiff/quadrature.hpp"

#include "degdiff/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace degdiff::quad {
namespace {

struct Panel {
  const Integrand& f;
  long evaluations = 0;
  double error = 0.0;

  double eval(double x) {
    ++evaluations;
    return f(x);
  }

  double refine(double a, double b, double fa, double fm, double fb, double whole,
                double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (!std::isfinite(delta)) return left + right;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
  }
};

}  // namespace

Result adaptive_simpson(const Integrand& f, double lo, double hi, double rel_tol,
                        int initial_panels, int max_depth) {
  Result out;
  if (hi == lo) return out;
  const int n = std::max(initial_panels, 1);
  const double width = (hi - lo) / n;

  Panel panel{f};
  std::vector<double> fx(2 * n + 1);
  for (int i = 0; i <= 2 * n; ++i) fx[i] = panel.eval(lo + 0.5 * width * i);

  std::vector<double> coarse(n);
  double magnitude = 0.0;
  for (int i = 0; i < n; ++i) {
    coarse[i] = width / 6.0 * (fx[2 * i] + 4.0 * fx[2 * i + 1] + fx[2 * i + 2]);
    magnitude += std::abs(coarse[i]);
  }
  const double floor = std::numeric_limits<double>::min();
  const double eps = rel_tol * std::max(magnitude, floor) / n;

  for (int i = 0; i < n; ++i) {
    const double a = lo + width * i;
    out.value += panel.refine(a, a + width, fx[2 * i], fx[2 * i + 1], fx[2 * i + 2],
                              coarse[i], eps, max_depth);
  }
  out.abs_error = panel.error;
  out.evaluations = panel.evaluations;
  return out;
}

Result adaptive_simpson_split(const Integrand& f, double lo, double hi,
                              std::span<const double> breakpoints, double rel_tol) {
  std::vector<double> cuts{lo};
  for (double b : breakpoints)
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());

  Result out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Result piece = adaptive_simpson(f, cuts[i], cuts[i + 1], rel_tol);
    out.value += piece.value;
    out.abs_error += piece.abs_error;
    out.evaluations += piece.evaluations;
  }
  return out;
}

Result semi_infinite(const Integrand& f, double lo, double rel_tol,
                     std::span<const double> breakpoints, int max_doublings) {
  Result out;
  double width = 1.0;
  double left = lo;
  int small_panels = 0;
  for (int j = 0; j < max_doublings; ++j) {
    const double right = left + width;
    const Result piece = adaptive_simpson_split(f, left, right, breakpoints, rel_tol);
    out.value += piece.value;
    out.abs_error += piece.abs_error;
    out.evaluations += piece.evaluations;
    if (!std::isfinite(out.value) || std::abs(out.value) > 1e300) break;
    if (std::abs(piece.value) <= rel_tol * std::abs(out.value)) {
      if (++small_panels == 2) return out;
    } else {
      small_panels = 0;
    }
    left = right;
    width *= 2.0;
  }
  std::ostringstream msg;
  msg << "improper integral from " << lo << " did not converge after " << max_doublings
      << " doublings (partial sum " << out.value << ")";
  throw DivergenceError(msg.str(), out.value);
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i + 1 < n; ++i) sum += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  return sum;
}

}  // namespace degdiff::quad
