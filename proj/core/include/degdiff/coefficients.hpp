#pragma once

#include "degdiff/grid.hpp"
#include "degdiff/quadrature.hpp"
#include "degdiff/report.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace degdiff {

enum class Family { power_law, counterexample, tabulated };

std::string_view to_string(Family f);

/// a(s) = k s^ρ.
struct PowerLaw {
  double k = 1.0;
  double rho = 1.0;
};

/// The logarithmic branch |ln s|^{2/λ} / (λ|ln s| − (λ+N−2)) on (0, u*),
/// spliced continuously to the linear branch a*(s+1) on [u*, ∞).
struct Counterexample {
  double lambda = 3.0;
  int dimension = 2;
  double u_star = 0.0;
  double a_star = 0.0;

  double log_branch(double s) const;
};

/// Piecewise-linear table through (s_i, a_i) with s_0 = 0, a_0 = 0. Beyond the
/// last abscissa the value is a_last (s/s_last)^tail_exponent; the default
/// exponent 0 is constant extrapolation.
struct Tabulated {
  std::vector<double> s;
  std::vector<double> a;
  double tail_exponent = 0.0;
};

/// A diffusion coefficient a : [0,∞) → [0,∞) with a(0) = 0 and a(s) > 0 for s > 0.
/// Immutable once constructed; every factory validates the family invariants.
class Coefficient {
public:
  using Params = std::variant<PowerLaw, Counterexample, Tabulated>;

  static Coefficient power_law(double k, double rho);
  /// a ≡ k: the nondegenerate heat-equation reference, outside the a(0) = 0
  /// class. Stored as a power law with ρ = 0.
  static Coefficient constant(double k);
  /// Explicit splice; throws unless the log branch is positive on (0, u*]
  /// and the two branches agree at u* to 1e-12 relative.
  static Coefficient counterexample(double lambda, int dimension, double u_star, double a_star);
  static Coefficient tabulated(std::vector<double> s, std::vector<double> a,
                               double tail_exponent = 0.0);

  Family family() const;
  const Params& params() const { return params_; }

  double operator()(double s) const;
  /// a'(s) in closed form, or nullopt when the family has none (tabulated).
  std::optional<double> derivative(double s) const;
  /// Points in (0,∞) where a is not smooth (splice point, table abscissae).
  std::vector<double> breakpoints() const;

private:
  explicit Coefficient(Params p) : params_(std::move(p)) {}
  Params params_;
};

/// a(s); throws DomainError for s < 0.
double eval_a(const Coefficient& coeff, double s);

/// I(s) = ∫_s^∞ dτ / (τ a(τ)), computed as ∫_{ln s}^∞ dx / a(e^x) split at
/// x = 0 and at the coefficient's breakpoints. Throws DivergenceError when the
/// tail does not settle.
quad::Result eval_I(const Coefficient& coeff, double s, double tol = 1e-10);

/// Boundedness of a(s)I(s) as s → 0. The grid must reach down to 1e-8.
ConditionReport check_test1(const Coefficient& coeff, const LogGrid& grid, double tol = 1e-10);

struct Test2Options {
  double s_min = 1e-8;
  double s_max = 0.99;
  int points_per_decade = 10;
  double c_floor = 1e-6;            ///< c_hat below this counts as 0
  double refinement_ratio = 0.9;    ///< fine/coarse c_hat must stay above this
  double tol = 1e-10;
};

/// Existence of (c, μ) with a(s)I^μ(s) ≥ c a(v)I^μ(v) for 0 < s < v < 1.
/// Reports the smallest adequate μ of `mu_grid` and its constant.
ConditionReport check_test2(const Coefficient& coeff, std::span<const double> mu_grid,
                            const Test2Options& options = {});

/// Boundedness of a(s)I(s) as s → ∞, sampled on [1, 1e6].
ConditionReport check_at_infinity(const Coefficient& coeff, double tol = 1e-10);

/// |ln u*| used by the default splice: 2(λ+N−2)/λ.
double default_log_splice(double lambda, int dimension);

/// Counter-example coefficient with u* = exp(−2(λ+N−2)/λ) and a* set by continuity.
Coefficient make_counterexample(double lambda, int dimension);
/// Same construction with u* = exp(−log_splice); needs log_splice > (λ+N−2)/λ.
Coefficient make_counterexample(double lambda, int dimension, double log_splice);

/// Re-evaluates the witnessed quantity of a test1 / test2 / at-infinity report.
double recheck_witness(const Coefficient& coeff, const ConditionReport& report,
                       double tol = 1e-10);

}  // namespace degdiff
