#include "degdiff/errors.hpp"
#include "degdiff/weights.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace degdiff;

TEST(WeightH, PowerFamily) {
  EXPECT_NEAR(eval_H(WeightPair::power(0.5), 4.0), 2.0, 1e-15);
  EXPECT_EQ(eval_H(WeightPair::power(0.5), 0.0), 0.0);
  EXPECT_NEAR(eval_H(WeightPair::power(0.0), 0.7), 0.7, 1e-15);
}

TEST(WeightH, CustomByQuadrature) {
  EXPECT_NEAR(eval_H(WeightPair::custom("log1p"), 2.0), std::log(3.0), 1e-10);
  EXPECT_NEAR(eval_H(WeightPair::custom("exp-decay"), 1.5), 1.0 - std::exp(-1.5), 1e-10);
  EXPECT_NEAR(eval_H(WeightPair::custom("inv-sqrt"), 0.25), 0.5, 1e-9);
  EXPECT_NEAR(eval_H(WeightPair::custom("step"), 3.0), 1.0 + 2.0 * 2.0, 1e-10);
}

TEST(WeightH, NonintegrableWeightIsDomainError) {
  EXPECT_THROW(eval_H(WeightPair::custom("reciprocal"), 1.0), DomainError);
}

TEST(WeightH, InvalidParameters) {
  EXPECT_THROW(WeightPair::power(1.0), ParameterError);
  EXPECT_THROW(WeightPair::power(-0.1), ParameterError);
  EXPECT_THROW(WeightPair::power(0.5, 0.0), ParameterError);
  EXPECT_THROW(WeightPair::custom("nope"), ParameterError);
  EXPECT_THROW(eval_H(WeightPair::power(0.5), -1.0), DomainError);
}

TEST(WeightF, BasicModelIsConstant) {
  // h(s) = s^{−γ} and a(s) = K s^γ.
  const double gamma = 0.5, K = 1.7;
  const WeightPair w = WeightPair::power(gamma, 1.0 / (1.0 - gamma));
  const Coefficient a = Coefficient::power_law(K, gamma);
  for (double s : {1e-6, 0.01, 0.5, 3.0, 100.0}) EXPECT_NEAR(eval_F(w, a, s), K, 1e-12 * K) << s;
  EXPECT_EQ(eval_F(w, a, 0.0), 0.0);
}

TEST(WeightF, IdentityWeight) {
  EXPECT_NEAR(eval_F(WeightPair::power(0.0), Coefficient::power_law(1.0, 1.0), 0.3), 0.3, 1e-15);
}

TEST(Assumptions, NoHPrime1ClosedForm) {
  AssumptionParams p;
  p.id = AssumptionId::no_h_prime_1;
  p.p1 = 1.0;
  p.q1 = 1.0;
  const ConditionReport r =
      check_assumption(WeightPair::power(0.0), Coefficient::power_law(1.0, 1.0), p, AssumptionGrid{});
  EXPECT_EQ(r.verdict, Verdict::satisfied);
  EXPECT_NEAR(r.constants.at("c3"), 2.0, 1e-9);
  EXPECT_EQ(r.grid.at("route"), "closed-form");
}

TEST(Assumptions, HHProductClosedForm) {
  AssumptionParams p;
  p.id = AssumptionId::hh_product;
  p.gamma1 = 1.0;
  p.bound = 5.0;
  const ConditionReport r =
      check_assumption(WeightPair::power(0.5), Coefficient::power_law(1.0, 1.0), p, AssumptionGrid{});
  EXPECT_EQ(r.verdict, Verdict::satisfied);
  EXPECT_NEAR(r.constants.at("c1"), 1.0, 1e-9);
}

TEST(Assumptions, NoHPrime2ClosedForm) {
  AssumptionParams p;
  p.id = AssumptionId::no_h_prime_2;
  p.gamma1 = 1.0;
  p.beta = 1.0;
  const ConditionReport r =
      check_assumption(WeightPair::power(0.0), Coefficient::power_law(1.0, 1.0), p, AssumptionGrid{});
  EXPECT_EQ(r.verdict, Verdict::satisfied);
  EXPECT_NEAR(r.constants.at("c4"), 2.0, 1e-9);
}

TEST(Assumptions, FiniteDifferenceRouteAgrees) {
  AssumptionParams p;
  p.id = AssumptionId::no_h_prime_1;
  p.p1 = 1.0;
  p.q1 = 1.0;
  const Coefficient table = Coefficient::tabulated({0.0, 1e4}, {0.0, 1e4});
  const ConditionReport r = check_assumption(WeightPair::power(0.0), table, p, AssumptionGrid{});
  EXPECT_EQ(r.verdict, Verdict::satisfied);
  EXPECT_EQ(r.grid.at("route"), "finite-difference");
  EXPECT_NEAR(r.constants.at("c3"), 2.0, 1e-6);
}

TEST(Assumptions, UpperBoundViolationHasWitness) {
  // [H^{3/2}]' = (3/2)s^{1/2} is unbounded against H^{1/4}·c.
  AssumptionParams p;
  p.id = AssumptionId::no_h_prime_2;
  p.gamma1 = 0.5;
  p.beta = 0.25;
  const WeightPair w = WeightPair::power(0.0);
  const Coefficient a = Coefficient::power_law(1.0, 1.0);
  const ConditionReport r = check_assumption(w, a, p, AssumptionGrid{});
  ASSERT_EQ(r.verdict, Verdict::violated);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_GT(r.witness->value, r.witness->bound);
  EXPECT_EQ(recheck_witness(w, a, p, r), r.witness->value);
}

TEST(Assumptions, UnbbFollowsExponentSignForPowerWeights) {
  // F·H^p = (1−γ)s^{(ρ−γ)+p(1−γ)} with ρ = 0.5.
  for (double gamma : {0.0, 0.3, 0.6}) {
    for (double pw : {0.0, 1.0, 2.0}) {
      AssumptionParams p;
      p.id = AssumptionId::unbounded_monotone;
      p.p = pw;
      const ConditionReport r =
          check_assumption(WeightPair::power(gamma), Coefficient::power_law(1.0, 0.5), p, AssumptionGrid{});
      const double exponent = (0.5 - gamma) + pw * (1.0 - gamma);
      EXPECT_EQ(r.verdict, exponent >= 0.0 ? Verdict::satisfied : Verdict::violated)
          << gamma << ' ' << pw;
    }
  }
}

TEST(Assumptions, KinkedWeightIsInconclusive) {
  AssumptionParams p;
  p.id = AssumptionId::no_h_prime_2;
  p.gamma1 = 1.0;
  p.beta = 1.0;
  const ConditionReport r =
      check_assumption(WeightPair::custom("step"), Coefficient::power_law(1.0, 1.0), p, AssumptionGrid{});
  EXPECT_EQ(r.verdict, Verdict::inconclusive);
}

TEST(Assumptions, ParameterValidation) {
  AssumptionParams p;
  p.id = AssumptionId::extended_no_h_prime_2;
  p.q1 = 1.0;
  p.betas = {0.6, 0.8};
  EXPECT_THROW(p.validate(), ParameterError);
  p.betas = {0.8, 0.4};
  EXPECT_THROW(p.validate(), ParameterError);
  p.betas = {0.8, 0.6};
  EXPECT_NO_THROW(p.validate());
  EXPECT_THROW(assumption_from_string("unknown"), ParameterError);
  for (auto id : {AssumptionId::hh_product, AssumptionId::fh_product, AssumptionId::unbounded_monotone,
                  AssumptionId::no_h_prime_1, AssumptionId::no_h_prime_2,
                  AssumptionId::extended_no_h_prime_2})
    EXPECT_EQ(assumption_from_string(to_string(id)), id);
}

TEST(Assumptions, VerdictStableUnderGridDoubling) {
  AssumptionParams p;
  p.id = AssumptionId::no_h_prime_1;
  p.p1 = 1.0;
  p.q1 = 0.5;
  const WeightPair w = WeightPair::power(0.0);
  const Coefficient a = Coefficient::power_law(1.0, 0.5);
  const AssumptionGrid g;
  const ConditionReport base = check_assumption(w, a, p, g);
  const ConditionReport fine = check_assumption(w, a, p, g.refined(false));
  EXPECT_EQ(base.verdict, fine.verdict);
  const double c = base.constants.at("c3"), cf = fine.constants.at("c3");
  EXPECT_LT(std::abs(c - cf), 0.01 * std::abs(c));
}
