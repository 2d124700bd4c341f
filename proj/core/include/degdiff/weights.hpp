#pragma once

#include "degdiff/coefficients.hpp"
#include "degdiff/grid.hpp"
#include "degdiff/report.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace degdiff {

/// A built-in closed-form weight h, addressable by id from configs.
struct CustomWeight {
  std::string id;
  std::string description;
  std::function<double(double)> h;
  std::vector<double> breakpoints;  ///< points where h jumps or kinks
};

/// Registered custom weights: "log1p", "exp-decay", "inv-sqrt", "step", "reciprocal".
const std::vector<CustomWeight>& custom_weights();

/// The weight h with H(v) = ∫_0^v h and F = h·a.
///
/// Power family: h(s) = scale·(1−γ)·s^{−γ}, H(s) = scale·s^{1−γ}, γ ∈ [0,1).
/// Custom family: h from the registry, H by adaptive quadrature of h.
class WeightPair {
public:
  enum class Kind { power, custom };

  static WeightPair power(double gamma, double scale = 1.0);
  static WeightPair custom(std::string_view id);

  Kind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  double scale() const { return scale_; }
  const std::string& custom_id() const { return custom_id_; }

  double h(double s) const;
  /// h'(s) when known in closed form (power family).
  std::optional<double> dh(double s) const;
  double H(double s) const;
  bool closed_form() const { return kind_ == Kind::power; }
  std::vector<double> breakpoints() const;

private:
  WeightPair() = default;
  Kind kind_ = Kind::power;
  double gamma_ = 0.0;
  double scale_ = 1.0;
  std::string custom_id_;
  const CustomWeight* custom_ = nullptr;
};

/// H(s); throws DomainError for s < 0 or when h is not integrable at 0.
double eval_H(const WeightPair& w, double s);
/// F(s) = h(s)a(s), with F(0) = 0.
double eval_F(const WeightPair& w, const Coefficient& coeff, double s);

enum class AssumptionId {
  hh_product,              ///< [H^{γ₁+1}]' ≤ c₁ on [0,M]
  fh_product,              ///< [F H^{γ₁+1}]' ≥ c₂ > 0 on [0,M]
  unbounded_monotone,      ///< [F H^p]' ≥ 0 on [0,∞)
  no_h_prime_1,            ///< [H^{p₁} F]' ≥ c₃ H^{q₁}
  no_h_prime_2,            ///< [H^{γ₁+1}]' ≤ c₄ H^β
  extended_no_h_prime_2,   ///< [H^{γ₁+1}]' ≤ c₅ Σ H^{βᵢ}
};

std::string_view to_string(AssumptionId id);
AssumptionId assumption_from_string(std::string_view s);

struct AssumptionParams {
  AssumptionId id = AssumptionId::hh_product;
  double gamma1 = 1.0;
  double p = 0.0;
  double p1 = 1.0;
  double q1 = 1.0;
  double beta = 1.0;
  std::vector<double> betas;  ///< extended form: β₁ > β₂ > ... > q₁/2
  double bound = 1.0;         ///< M for the bounded-solution assumptions

  /// Throws ParameterError when an exponent constraint of `id` fails.
  void validate() const;
  bool bounded() const;
};

struct AssumptionOptions {
  double fd_relative_step = 1e-5;
  double stability_tolerance = 0.01;  ///< allowed constant change under refinement
  double smoothness_tolerance = 0.10; ///< FD disagreement that flags nonsmooth H
};

/// Samples the assumption's derivative quantity on `grid` and on its
/// refinement and reports the tightest constant (sup for upper bounds, inf for
/// lower bounds). Closed-form derivatives are used when both the weight and
/// the coefficient provide them, central differences with Richardson
/// refinement otherwise.
ConditionReport check_assumption(const WeightPair& w, const Coefficient& coeff,
                                 const AssumptionParams& params, const AssumptionGrid& grid,
                                 const AssumptionOptions& options = {});

/// The sampled derivative quantity of an assumption at one point.
double assumption_quantity(const WeightPair& w, const Coefficient& coeff,
                           const AssumptionParams& params, double s,
                           const AssumptionOptions& options = {});

/// Re-evaluates the witness of a check_assumption report.
double recheck_witness(const WeightPair& w, const Coefficient& coeff,
                       const AssumptionParams& params, const ConditionReport& report,
                       const AssumptionOptions& options = {});

}  // namespace degdiff
