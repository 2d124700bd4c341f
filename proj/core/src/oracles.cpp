#include "degdiff/oracles.hpp"

#include "degdiff/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace degdiff {

SelfSimilarSolution::SelfSimilarSolution(double lambda, int dimension)
    : lambda_(lambda), dimension_(dimension) {
  if (!(lambda > 2.0)) throw ParameterError("self-similar solution needs lambda > 2");
  if (dimension < 1) throw ParameterError("dimension must be >= 1");
  s0_ = std::pow((lambda + dimension - 2.0) / lambda, 1.0 / lambda);

  // Check u_t and Δu = u_rr + (N−1)u_r/r against central differences.
  for (double s : {1.1 * s0_, 1.5 * s0_, 2.0 * s0_}) {
    for (double t : {0.2, 0.5}) {
      const double r = s * std::sqrt(2.0 * t);
      // u varies on the scale r/(λs^λ) in both r and t.
      const double variation = std::max(1.0, lambda * std::pow(s, lambda));
      const double h = 1e-4 * r / variation, k = 1e-4 * t / variation;
      const SelfSimilarValue v = eval(r, t);
      const double ut = (eval(r, t + k).u - eval(r, t - k).u) / (2.0 * k);
      const double up = eval(r + h, t).u, um = eval(r - h, t).u;
      const double lap = (up - 2.0 * v.u + um) / (h * h) + (dimension - 1) * (up - um) / (2.0 * h * r);
      const double f = v.u, ls = std::pow(s, lambda);
      const double terms = f * lambda * std::pow(s, lambda - 2.0) *
                           (lambda * ls + (lambda - 1.0) + (dimension - 1.0)) / (2.0 * t);
      const double su = std::max(std::abs(v.u_t), 1e-300);
      const double sl = std::max(terms, 1e-300);
      if (std::abs(ut - v.u_t) > 1e-5 * su || std::abs(lap - v.laplacian) > 1e-5 * sl)
        throw InternalInvariantError("self-similar derivatives disagree with finite differences");
    }
  }
}

SelfSimilarValue SelfSimilarSolution::eval(double radius, double t) const {
  if (!(t > 0.0)) throw DomainError("self-similar solution needs t > 0");
  const double r = std::abs(radius);
  const double s = r / std::sqrt(2.0 * t);
  const double lam = lambda_;
  SelfSimilarValue v;
  v.u = std::exp(-std::pow(s, lam));
  if (s == 0.0) return v;
  const double f = v.u;
  const double df = -lam * std::pow(s, lam - 1.0) * f;
  const double d2f =
      (lam * lam * std::pow(s, 2.0 * lam - 2.0) - lam * (lam - 1.0) * std::pow(s, lam - 2.0)) * f;
  v.u_t = -s * df / (2.0 * t);
  v.laplacian = (d2f + (dimension_ - 1) * df / s) / (2.0 * t);
  return v;
}

SelfSimilarValue SelfSimilarSolution::eval(std::span<const double> x, double t) const {
  double r2 = 0.0;
  for (double xi : x) r2 += xi * xi;
  return eval(std::sqrt(r2), t);
}

std::vector<SpaceTimePoint> similarity_grid(double s_lo, double s_hi, int ns, double t_lo,
                                            double t_hi, int nt) {
  if (ns < 2 || nt < 2 || !(s_hi > s_lo) || !(t_hi > t_lo))
    throw ParameterError("similarity grid needs at least 2x2 points on nonempty ranges");
  std::vector<SpaceTimePoint> out;
  for (int j = 0; j < nt; ++j) {
    const double t = t_lo + (t_hi - t_lo) * j / (nt - 1);
    for (int i = 0; i < ns; ++i) {
      const double s = s_lo + (s_hi - s_lo) * i / (ns - 1);
      out.push_back({s * std::sqrt(2.0 * t), t});
    }
  }
  return out;
}

ResidualReport residual(const SelfSimilarSolution& sol, const Coefficient& coeff,
                        std::span<const SpaceTimePoint> points) {
  const auto* ce = std::get_if<Counterexample>(&coeff.params());
  if (!ce || ce->lambda != sol.lambda() || ce->dimension != sol.dimension())
    throw ParameterError("residual needs the counter-example coefficient with matching lambda, N");
  ResidualReport r;
  for (const SpaceTimePoint& p : points) {
    if (!(p.t > 0.0 && p.t < 1.0)) throw DomainError("sample time outside (0,1)");
    const double s = std::abs(p.radius) / std::sqrt(2.0 * p.t);
    if (!(s > sol.s0())) throw DomainError("sample with s <= s0 lies outside the validity region");
    const SelfSimilarValue v = sol.eval(p.radius, p.t);
    if (!(v.u < ce->u_star))
      throw DomainError("sample with u >= u* (s = " + std::to_string(s) + ") is on the linear branch");
    const double rhs = coeff(v.u) * v.laplacian;
    r.max_abs = std::max(r.max_abs, std::abs(v.u_t - rhs));
    r.scale = std::max({r.scale, std::abs(v.u_t), std::abs(rhs)});
    ++r.samples;
  }
  r.max_relative = r.scale > 0.0 ? r.max_abs / r.scale : 0.0;
  return r;
}

double heat_solution(double K, int mode, double x, double t) {
  const double k = mode * M_PI;
  return std::exp(-K * k * k * t) * std::sin(k * x);
}

Trajectory sample_selfsimilar(const SelfSimilarSolution& sol, const Mesh& mesh,
                              std::span<const double> times) {
  mesh.validate();
  Trajectory traj;
  traj.mesh = mesh;
  for (double t : times) {
    if (!(t >= 0.0)) throw DomainError("sample times must be nonnegative");
    if (!traj.times.empty() && !(t > traj.times.back()))
      throw ParameterError("sample times must be strictly increasing");
    std::vector<double> u(mesh.n);
    for (int i = 0; i < mesh.n; ++i) {
      const double x = mesh.x(i);
      u[i] = t == 0.0 ? (x == 0.0 ? 1.0 : 0.0) : sol.eval(x, t).u;
    }
    traj.times.push_back(t);
    traj.states.push_back(std::move(u));
  }
  return traj;
}

}  // namespace degdiff
