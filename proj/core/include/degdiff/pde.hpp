#pragma once

#include "degdiff/coefficients.hpp"
#include "degdiff/weights.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace degdiff {

/// Uniform 1-D mesh: an interval [x_lo, x_hi], or the radial coordinate
/// r ∈ [0, R] of a ball in dimension N.
struct Mesh {
  enum class Geometry { interval, radial };

  Geometry geometry = Geometry::interval;
  double x_lo = 0.0;
  double x_hi = 1.0;
  int n = 101;
  int dimension = 1;

  static Mesh interval(double x_lo, double x_hi, int n);
  static Mesh radial(double radius, int dimension, int n);

  double dr() const { return (x_hi - x_lo) / (n - 1); }
  double x(int i) const { return x_lo + i * dr(); }
  std::vector<double> nodes() const;
  /// Trapezoid weights including the r^{N−1} measure on radial meshes.
  std::vector<double> quadrature_weights() const;
  /// True for nodes carrying the homogeneous Dirichlet condition.
  bool is_boundary(int i) const;
  /// Throws ParameterError on an invalid mesh.
  void validate() const;
};

std::string_view to_string(Mesh::Geometry g);

/// Step statistics for the interval between two consecutive output times.
struct StepLogEntry {
  double t_start = 0.0;
  double t_end = 0.0;
  long steps = 0;
  double dt_min = 0.0;
  double dt_max = 0.0;
  double cfl_max = 0.0;  ///< max of dt·a(u_i)·d_i / (2 dr²) over the interval's steps
};

struct Trajectory {
  Mesh mesh;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<StepLogEntry> step_log;
};

struct BumpProfile {
  double center = 0.5;
  double width = 0.1;  ///< support length
  double height = 1.0;
};

struct SineProfile {
  int mode = 1;
  double amplitude = 1.0;
};

struct TableProfile {
  std::vector<double> x;
  std::vector<double> u;
};

/// Named initial data: height·(1−ξ²)² on the bump support, amplitude·sin(kπξ)
/// on the rescaled mesh, or a piecewise-linear table (0 outside its range).
using InitialProfile = std::variant<BumpProfile, SineProfile, TableProfile>;

/// Samples `profile` on `mesh`; Dirichlet nodes are set to 0.
std::vector<double> sample_profile(const InitialProfile& profile, const Mesh& mesh);

struct SolverOptions {
  double cfl = 0.4;
  double dt_floor = 1e-14;
  /// Upper bound on total steps, checked against the projection
  /// steps_taken + (t_end − t)/dt at every step.
  double max_steps = 1e8;
};

/// Explicit time stepping of u_t = a(u)Δu with homogeneous Dirichlet data.
///
/// Interval meshes use the 3-point Laplacian. Radial meshes use the
/// conservative stencil r^{1−N}(r^{N−1}u')' with Δu = 2N(u₁−u₀)/dr² at the
/// origin. The step is dt = cfl·2dr²/max_i(a(u_i)d_i), where d_i is the
/// diagonal stencil weight (2 on interval meshes), which keeps every update a
/// convex combination of neighbouring values. States are stored at t = 0 and
/// at each output time, which the stepper hits exactly. Throws StiffnessError
/// when dt falls below dt_floor or the projected step count exceeds max_steps.
Trajectory solve_ibvp(const Coefficient& coeff, const Mesh& mesh, std::span<const double> u0,
                      double t_end, std::span<const double> output_times,
                      const SolverOptions& options = {});

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct FrontReport {
  enum class Verdict { finite_speed_consistent, immediate_positivity };

  Interval ball;
  double epsilon = 0.5;
  Interval shrunk_ball;
  std::vector<double> thresholds;  ///< ε_supp·10^j, j = 0..4
  std::vector<double> t_prime;     ///< per threshold
  /// support[j][m]: maximal node runs with u ≥ thresholds[j] at times[m].
  std::vector<std::vector<std::vector<Interval>>> support;
  std::vector<double> times;
  Verdict verdict = Verdict::finite_speed_consistent;

  double first_t_prime() const { return t_prime.front(); }
};

std::string_view to_string(FrontReport::Verdict v);

/// Measures how long the ε-shrunk ball εB stays below each threshold.
/// `eps_supp` defaults to 1e−10·max(u0). Throws DomainError when B leaves the
/// mesh, εB holds no node, or u0 reaches eps_supp on B.
FrontReport detect_front(const Trajectory& traj, Interval ball, double epsilon,
                         std::optional<double> eps_supp = std::nullopt);

/// φ(x,t) = amplitude·χ(x)ψ(t) with χ, ψ tents (hat functions) or smooth
/// (1−ξ²)² bumps on the given supports.
struct TestFunction {
  enum class Shape { tent, smooth };

  Shape shape = Shape::tent;
  Interval x_support;
  Interval t_support;
  double amplitude = 1.0;

  double value(double x, double t) const;
  /// ∂φ/∂t; at tent kinks in t, the mean of the one-sided derivatives.
  double dt(double x, double t) const;
};

/// max over test functions of ∬∇u·∇(F(u)φ) − ∬H(u)φ_t, by trapezoid rules in
/// space (cell gradients, r^{N−1} measure) and over the stored output times.
/// Returns 0 for an empty set. Throws DomainError when a support leaves the
/// mesh or the trajectory's time span.
double weak_residual(const Trajectory& traj, const WeightPair& w, const Coefficient& coeff,
                     std::span<const TestFunction> test_fns);

}  // namespace degdiff
