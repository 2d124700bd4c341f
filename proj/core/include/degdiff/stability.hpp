#pragma once

#include "degdiff/fit.hpp"
#include "degdiff/pde.hpp"
#include "degdiff/report.hpp"
#include "degdiff/weights.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace degdiff {

/// Sampled values of a functional ∫[H(u)]^exponent at a trajectory's output times.
struct FunctionalSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::string descriptor;
  double exponent = 1.0;
};

/// Y(t) = ∫[H(u)]^exponent dx by trapezoid quadrature; exponent ≥ 1.
FunctionalSeries compute_Y(const Trajectory& traj, const WeightPair& w, double exponent);
/// Same quadrature for any exponent > 0 (the auxiliary Z-type functionals).
FunctionalSeries compute_functional(const Trajectory& traj, const WeightPair& w, double exponent);

/// Closed-form solution of Y' = −kY^β with Y(t₀) = Y₀.
struct DecayEnvelope {
  double k = 1.0;
  double beta = 2.0;
  double t0 = 0.0;
  double Y0 = 1.0;

  /// Throws ParameterError unless k > 0, β > 1, Y₀ ≥ 0.
  void validate() const;
};

/// [k(β−1)(t−t₀) + Y₀^{−(β−1)}]^{−1/(β−1)}, and 0 when Y₀ = 0.
double envelope_value(const DecayEnvelope& env, double t);

struct OdeComparison {
  double max_gap = 0.0;  ///< max relative gap over the dense output (absolute where the envelope is 0)
  long steps = 0;
  long rejected = 0;
};

/// Integrates Y' = −kY^β with adaptive RK4 and compares against the envelope.
OdeComparison ode_comparison(const DecayEnvelope& env, double t_end, double tol = 1e-10);

struct BasicRate {
  double k1 = 0.0;
  double beta = 0.0;
};

/// k₁ = 4Km(m+γ−1)/(c₀²(1−γ)(m+γ)²) and β = (m+γ)/m for (u^{1−γ})_t = KΔu.
BasicRate analytic_rate_basic(double K, double gamma, double m, double c0);

/// Coefficient a(u) = K/(1−γ)·u^γ under which u_t = a(u)Δu is (u^{1−γ})_t = KΔu.
Coefficient basic_model_coefficient(double K, double gamma);

struct EnvelopeReport {
  bool dominated = true;
  bool monotone = true;
  bool zero_persists = true;   ///< once Y hits 0 it stays 0
  double max_ratio = 0.0;      ///< max Y_i / envelope(t_i) over positive envelopes
  double max_increase = 0.0;   ///< max(Y_{i+1} − Y_i, 0)
  std::optional<Witness> dominance_witness;  ///< s = t, value = Y, bound = (1+slack)·envelope
  std::optional<Witness> monotonicity_witness;
  std::optional<LinearFit> tail_fit;  ///< log Y against log t over the last decade of times
  double expected_tail_exponent = 0.0;  ///< −1/(β−1)
};

/// Dominance Y_i ≤ (1+slack)·envelope(t_i), monotonicity up to `monotone_tol`
/// (default 1e−10·Y(t₀)), zero persistence and a tail exponent fit.
EnvelopeReport verify_envelope(const FunctionalSeries& series, const DecayEnvelope& env,
                               double slack, std::optional<double> monotone_tol = std::nullopt);

/// Which differential inequality verify_odi checks.
enum class OdiForm {
  basic,          ///< Y' + k₁Y^{(m+γ)/m} ≤ 0
  critical,       ///< β = q₁/2: Y' + cY^{2/δ₁} ≤ 0
  supercritical,  ///< β > q₁/2: Y' + k/(Z+1)^{(2−δ₂)/δ₂}·Y^{2/δ₁} ≤ 0
  multi_term,     ///< β₁ > β₂ > ... > q₁/2: Y' + K/(ΣZᵢ+1)^{(2−δ₂)/δ₂}·Y^{2/δ₁} ≤ 0
};

std::string_view to_string(OdiForm f);
OdiForm odi_form_from_string(std::string_view s);

enum class RateMode { fitted, analytic };

struct OdiParams {
  OdiForm form = OdiForm::critical;
  double m = 2.0;       ///< basic form
  double gamma = 0.5;   ///< basic form
  double p1 = 1.0;
  double q1 = 1.0;
  double gamma1 = 1.0;
  double beta = 0.5;
  std::vector<double> betas;  ///< multi-term form
  int dimension = 1;
  RateMode mode = RateMode::fitted;
  double rate = 0.0;    ///< supplied constant when mode = analytic

  /// Throws ParameterError when the form's exponent constraints fail.
  void validate() const;
  /// (p₁+1)/(γ₁+1).
  double delta1() const;
  /// 1 if δ₁ ≤ N/(N−1), else δ₁N/(N+δ₁).
  double delta2() const;
  /// Exponent of Y in the inequality.
  double y_exponent() const;
  /// Exponents (βᵢ − q₁/2)·2δ₂/(2−δ₂) of the auxiliary functionals: p₀ for
  /// the supercritical form, p₂, p₃, ... for the multi-term form.
  std::vector<double> z_exponents() const;
};

/// (p₁+1)c₃/(c₄²c_p²): the critical-form constant built from the assumption
/// constants and the Poincaré–Sobolev constant c_p.
double analytic_rate_critical(double p1, double c3, double c4, double c_p);

struct OdiReport {
  bool holds = false;
  std::optional<double> measured_rate;  ///< min_i(−Y'_i/G_i) over samples with G_i > 0
  double rate_used = 0.0;
  double max_violation = 0.0;    ///< max_i(Y'_i + rate·G_i)
  double tolerance = 0.0;        ///< slack·max|Y'|
  double max_abs_derivative = 0.0;
  double curvature_scale = 0.0;  ///< dt_out·max|Y''| from second differences
  std::optional<Witness> witness;  ///< s = t, value = Y' + rate·G, bound = tolerance
};

/// Checks the chosen inequality at interior output times with centred
/// (nonuniform) differences. `z` holds the auxiliary series in the order of
/// OdiParams::z_exponents(). In fitted mode the measured rate is used.
OdiReport verify_odi(const FunctionalSeries& y, std::span<const FunctionalSeries> z,
                     const OdiParams& params, double slack);

/// Integrates Y' = −𝒴(Y) from (t₀, Y₀) and samples it at `times` (all ≥ t₀).
/// Throws DomainError if 𝒴 is negative at a visited value.
FunctionalSeries generalized_odi_envelope(const std::function<double(double)>& rate_fn,
                                          double Y0, double t0, std::span<const double> times,
                                          double tol = 1e-10);

struct PoincareCheck {
  double c0 = 0.5;
  double q = 2.0;          ///< +inf for the sup norm
  double max_ratio = 0.0;  ///< max ‖w‖_q / ‖w'‖_2 over the samples
  int samples = 0;
  bool holds = false;
};

/// Samples random sine series and tents on (0,1) vanishing at both ends and
/// compares ‖w‖_q against c0·‖w'‖_{L²}.
PoincareCheck validate_poincare_1d(double c0, double q, int samples, std::uint64_t seed);

}  // namespace degdiff
