#include "degdiff/errors.hpp"
#include "degdiff/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace degdiff;

TEST(SelfSimilar, Values) {
  const SelfSimilarSolution sol(3.0, 2);
  EXPECT_NEAR(sol.eval(std::sqrt(2.0 * 0.3), 0.3).u, std::exp(-1.0), 1e-15);
  EXPECT_NEAR(sol.s0(), std::cbrt(1.0), 1e-15);
  EXPECT_NEAR(SelfSimilarSolution(4.0, 3).s0(), std::pow(5.0 / 4.0, 0.25), 1e-15);
  EXPECT_LT(sol.eval(1.0, 1e-4).u, 1e-100);
  EXPECT_GT(sol.eval(5.0, 0.5).u, 0.0);
  EXPECT_THROW(sol.eval(1.0, 0.0), DomainError);
  EXPECT_THROW(SelfSimilarSolution(2.0, 1), ParameterError);
  EXPECT_THROW(SelfSimilarSolution(3.0, 0), ParameterError);
}

TEST(SelfSimilar, CartesianEvaluationUsesRadius) {
  const SelfSimilarSolution sol(3.0, 2);
  const std::vector<double> x{0.3, 0.4};
  EXPECT_NEAR(sol.eval(x, 0.4).u, sol.eval(0.5, 0.4).u, 1e-15);
}

TEST(SelfSimilar, CoefficientIdentity) {
  // a(f(s)) = s²/(λs^λ − (λ+N−2)) under |ln u| = s^λ.
  const double lambda = 3.0;
  const int N = 2;
  const Coefficient c = make_counterexample(lambda, N, 2.0);
  for (double s : {1.3, 1.5, 1.9}) {
    const double u = std::exp(-std::pow(s, lambda));
    EXPECT_NEAR(c(u), s * s / (lambda * std::pow(s, lambda) - (lambda + N - 2)), 1e-14) << s;
  }
}

TEST(Residual, StandardGrids) {
  for (auto [lambda, N] : {std::pair{2.5, 1}, std::pair{3.0, 2}, std::pair{4.0, 3}}) {
    const SelfSimilarSolution sol(lambda, N);
    const Coefficient c = make_counterexample(lambda, N, std::pow(1.1 * sol.s0(), lambda));
    const auto pts = similarity_grid(1.2 * sol.s0(), 3.0, 60, 0.1, 0.9, 17);
    const ResidualReport r = residual(sol, c, pts);
    EXPECT_EQ(r.samples, 60 * 17);
    EXPECT_LT(r.max_relative, 1e-10) << lambda << ' ' << N;
  }
}

TEST(Residual, DomainChecks) {
  const SelfSimilarSolution sol(3.0, 2);
  const Coefficient c = make_counterexample(3.0, 2, std::pow(1.1 * sol.s0(), 3.0));
  const std::vector<SpaceTimePoint> inside{{std::sqrt(2.0 * 0.5) * 0.9 * sol.s0(), 0.5}};
  EXPECT_THROW(residual(sol, c, inside), DomainError);
  const std::vector<SpaceTimePoint> late{{2.0, 1.5}};
  EXPECT_THROW(residual(sol, c, late), DomainError);
  // The default splice leaves u ≥ u* just above s₀.
  const std::vector<SpaceTimePoint> above{{std::sqrt(2.0 * 0.5) * 1.2 * sol.s0(), 0.5}};
  EXPECT_THROW(residual(sol, make_counterexample(3.0, 2), above), DomainError);
  EXPECT_THROW(residual(sol, make_counterexample(3.0, 1), above), ParameterError);
  EXPECT_THROW(residual(sol, Coefficient::power_law(1.0, 1.0), above), ParameterError);
}

TEST(Heat, Values) {
  EXPECT_NEAR(heat_solution(1.0, 1, 0.5, 0.1), std::exp(-std::numbers::pi * std::numbers::pi / 10.0), 1e-15);
  EXPECT_NEAR(heat_solution(1.0, 1, 0.5, 0.1), 0.372708, 1e-6);
  EXPECT_NEAR(heat_solution(1.0, 3, 0.1, 0.0), std::sin(0.3 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(heat_solution(2.0, 2, 0.0, 0.3), 0.0, 1e-15);
  EXPECT_NEAR(heat_solution(2.0, 2, 1.0, 0.3), 0.0, 1e-15);
}

TEST(Heat, SatisfiesEquation) {
  const double x = 0.3, t = 0.05, K = 1.5, h = 1e-4;
  const double ut = (heat_solution(K, 2, x, t + h) - heat_solution(K, 2, x, t - h)) / (2 * h);
  const double uxx =
      (heat_solution(K, 2, x + h, t) - 2 * heat_solution(K, 2, x, t) + heat_solution(K, 2, x - h, t)) / (h * h);
  EXPECT_NEAR(ut, K * uxx, 1e-4 * std::abs(ut));
}

TEST(Sample, InitialIndicatorAndPositivity) {
  const SelfSimilarSolution sol(3.0, 2);
  const Mesh m = Mesh::radial(1.0, 2, 11);
  const std::vector<double> times{0.0, 0.2};
  const Trajectory t = sample_selfsimilar(sol, m, times);
  EXPECT_EQ(t.states[0][0], 1.0);
  for (int i = 1; i < m.n; ++i) EXPECT_EQ(t.states[0][i], 0.0);
  for (int i = 0; i < m.n; ++i) EXPECT_GT(t.states[1][i], 0.0);
}
