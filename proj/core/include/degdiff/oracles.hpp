#pragma once

#include "degdiff/coefficients.hpp"
#include "degdiff/pde.hpp"

#include <span>
#include <vector>

namespace degdiff {

struct SelfSimilarValue {
  double u = 0.0;
  double u_t = 0.0;
  double laplacian = 0.0;
};

/// u(x,t) = exp(−s^λ) with s = |x|/√(2t), a radial solution of
/// u_t = a(u)Δu for the counter-example coefficient where s > s₀.
class SelfSimilarSolution {
public:
  /// Throws ParameterError for λ ≤ 2 or N < 1 and InternalInvariantError if
  /// the analytic derivatives disagree with finite differences.
  SelfSimilarSolution(double lambda, int dimension);

  double lambda() const { return lambda_; }
  int dimension() const { return dimension_; }
  /// ((λ+N−2)/λ)^{1/λ}, where the coefficient's denominator vanishes.
  double s0() const { return s0_; }

  /// Value and analytic derivatives at radius r; DomainError for t ≤ 0.
  SelfSimilarValue eval(double radius, double t) const;
  SelfSimilarValue eval(std::span<const double> x, double t) const;

private:
  double lambda_;
  int dimension_;
  double s0_;
};

struct SpaceTimePoint {
  double radius = 0.0;
  double t = 0.0;
};

/// Points r = s√(2t) of a tensor grid in s ∈ [s_lo, s_hi], t ∈ [t_lo, t_hi].
std::vector<SpaceTimePoint> similarity_grid(double s_lo, double s_hi, int ns, double t_lo,
                                            double t_hi, int nt);

struct ResidualReport {
  double max_abs = 0.0;       ///< max |u_t − a(u)Δu|
  double scale = 0.0;         ///< max over samples of max(|u_t|, |a(u)Δu|)
  double max_relative = 0.0;  ///< max_abs / scale
  int samples = 0;
};

/// Residual of the self-similar solution under `coeff`, which must be a
/// counter-example coefficient with matching λ and N. Throws DomainError when
/// a sample has t ∉ (0,1), s ≤ s₀, or u ≥ u*.
ResidualReport residual(const SelfSimilarSolution& sol, const Coefficient& coeff,
                        std::span<const SpaceTimePoint> points);

/// e^{−K(kπ)²t} sin(kπx) on (0,1) with Dirichlet data.
double heat_solution(double K, int mode, double x, double t);

/// Samples the solution at each mesh node (|x| on interval meshes) and time.
/// At t = 0 the state is the pointwise limit: 1 at the origin, 0 elsewhere.
Trajectory sample_selfsimilar(const SelfSimilarSolution& sol, const Mesh& mesh,
                              std::span<const double> times);

}  // namespace degdiff
