#include "degdiff/errors.hpp"
#include "degdiff/oracles.hpp"
#include "degdiff/stability.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace degdiff;

namespace {

Trajectory constant_state(double c, int n) {
  Trajectory t;
  t.mesh = Mesh::interval(0.0, 2.0, n);
  t.times = {0.0, 1.0};
  t.states = {std::vector<double>(n, c), std::vector<double>(n, c)};
  return t;
}

FunctionalSeries envelope_series(const DecayEnvelope& env, int n, double dt) {
  FunctionalSeries s;
  for (int i = 0; i < n; ++i) {
    s.times.push_back(env.t0 + i * dt);
    s.values.push_back(envelope_value(env, env.t0 + i * dt));
  }
  return s;
}

OdiParams basic_form(double m, double gamma) {
  OdiParams p;
  p.form = OdiForm::basic;
  p.m = m;
  p.gamma = gamma;
  return p;
}

}  // namespace

TEST(Functional, ZeroStateGivesZero) {
  const FunctionalSeries y = compute_Y(constant_state(0.0, 11), WeightPair::power(0.0), 2.0);
  for (double v : y.values) EXPECT_EQ(v, 0.0);
}

TEST(Functional, ConstantStateGivesPowerTimesLength) {
  const FunctionalSeries y = compute_Y(constant_state(0.5, 21), WeightPair::power(0.0), 3.0);
  EXPECT_NEAR(y.values.front(), 0.125 * 2.0, 1e-14);
  EXPECT_THROW(compute_Y(constant_state(0.5, 21), WeightPair::power(0.0), 0.5), ParameterError);
  EXPECT_NEAR(compute_functional(constant_state(0.25, 21), WeightPair::power(0.0), 0.5).values[0], 1.0,
              1e-14);
}

TEST(Functional, HeatEnergyDecay) {
  const Mesh m = Mesh::interval(0.0, 1.0, 201);
  const auto u0 = sample_profile(SineProfile{1, 1.0}, m);
  const std::vector<double> out{0.02, 0.05, 0.1};
  const Trajectory t = solve_ibvp(Coefficient::constant(1.0), m, u0, 0.1, out);
  const FunctionalSeries y = compute_Y(t, WeightPair::power(0.0), 2.0);
  for (std::size_t i = 0; i < y.times.size(); ++i)
    EXPECT_NEAR(y.values[i], 0.5 * std::exp(-2.0 * std::numbers::pi * std::numbers::pi * y.times[i]), 1e-3);
}

TEST(Envelope, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(envelope_value({1.0, 2.0, 0.0, 1.0}, 1.0), 0.5);
  EXPECT_EQ(envelope_value({1.0, 2.0, 0.0, 0.0}, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(envelope_value({2.0, 1.5, 1.0, 4.0}, 1.0), 4.0);
  EXPECT_THROW(envelope_value({1.0, 2.0, 1.0, 1.0}, 0.5), DomainError);
}

TEST(Envelope, Validation) {
  EXPECT_NO_THROW((DecayEnvelope{1.0, 1.0001, 0.0, 1.0}.validate()));
  EXPECT_THROW((DecayEnvelope{1.0, 1.0, 0.0, 1.0}.validate()), ParameterError);
  EXPECT_THROW((DecayEnvelope{0.0, 2.0, 0.0, 1.0}.validate()), ParameterError);
  EXPECT_THROW((DecayEnvelope{1.0, 2.0, 0.0, -1.0}.validate()), ParameterError);
}

TEST(Envelope, OdeComparison) {
  EXPECT_LT(ode_comparison({1.0, 2.0, 0.0, 1.0}, 10.0).max_gap, 1e-6);
  EXPECT_LT(ode_comparison({0.1, 3.0, 0.0, 5.0}, 10.0).max_gap, 1e-6);
  EXPECT_LT(ode_comparison({1.0, 1.0001, 0.0, 1.0}, 10.0).max_gap, 1e-6);
  EXPECT_EQ(ode_comparison({1.0, 2.0, 0.0, 0.0}, 10.0).max_gap, 0.0);
}

TEST(BasicRate, Arithmetic) {
  const BasicRate r = analytic_rate_basic(1.0, 0.5, 1.5, 1.0);
  EXPECT_NEAR(r.k1, 3.0, 1e-14);
  EXPECT_NEAR(r.beta, 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(analytic_rate_basic(1.0, 0.5, 1.5, 0.5).k1, 12.0, 1e-13);
  EXPECT_NO_THROW(analytic_rate_basic(1.0, 0.25, 1.75, 0.5));
  EXPECT_THROW(analytic_rate_basic(1.0, 0.5, 1.4, 0.5), ParameterError);
  EXPECT_THROW(analytic_rate_basic(1.0, 0.0, 2.0, 0.5), ParameterError);
  EXPECT_THROW(analytic_rate_basic(1.0, 1.0, 2.0, 0.5), ParameterError);
}

TEST(BasicRate, ModelCoefficient) {
  const Coefficient a = basic_model_coefficient(1.0, 0.5);
  EXPECT_NEAR(a(4.0), 2.0 * 2.0, 1e-14);
  EXPECT_EQ(basic_model_coefficient(3.0, 0.0)(0.0), 3.0);
}

TEST(VerifyEnvelope, SelfSeriesDominatedWithoutSlack) {
  const DecayEnvelope env{1.5, 2.0, 0.0, 2.0};
  const EnvelopeReport r = verify_envelope(envelope_series(env, 50, 0.1), env, 0.0);
  EXPECT_TRUE(r.dominated);
  EXPECT_TRUE(r.monotone);
  EXPECT_TRUE(r.zero_persists);
  EXPECT_NEAR(r.max_ratio, 1.0, 1e-15);
}

TEST(VerifyEnvelope, InflatedSeriesViolatedAtStart) {
  const DecayEnvelope env{1.5, 2.0, 0.0, 2.0};
  FunctionalSeries s = envelope_series(env, 50, 0.1);
  for (double& v : s.values) v *= 2.0;
  const EnvelopeReport r = verify_envelope(s, env, 0.05);
  EXPECT_FALSE(r.dominated);
  ASSERT_TRUE(r.dominance_witness.has_value());
  EXPECT_EQ(r.dominance_witness->s, 0.0);
  EXPECT_GT(r.dominance_witness->value, r.dominance_witness->bound);
}

TEST(VerifyEnvelope, DetectsIncreaseAndRevival) {
  const DecayEnvelope env{1.0, 2.0, 0.0, 1.0};
  FunctionalSeries s;
  s.times = {0.0, 1.0, 2.0, 3.0};
  s.values = {1.0, 0.0, 0.1, 0.0};
  const EnvelopeReport r = verify_envelope(s, env, 0.05);
  EXPECT_FALSE(r.monotone);
  EXPECT_FALSE(r.zero_persists);
  ASSERT_TRUE(r.monotonicity_witness.has_value());
  EXPECT_EQ(r.monotonicity_witness->s, 2.0);
}

TEST(VerifyEnvelope, TailExponent) {
  const DecayEnvelope env{1.0, 3.0, 0.0, 1.0};
  FunctionalSeries s;
  for (int i = 0; i <= 60; ++i) {
    const double t = std::pow(10.0, -1.0 + i * 0.1);
    s.times.push_back(t);
    s.values.push_back(envelope_value(env, t));
  }
  s.times.insert(s.times.begin(), 0.0);
  s.values.insert(s.values.begin(), 1.0);
  const EnvelopeReport r = verify_envelope(s, env, 0.0);
  ASSERT_TRUE(r.tail_fit.has_value());
  EXPECT_NEAR(r.expected_tail_exponent, -0.5, 1e-15);
  EXPECT_NEAR(r.tail_fit->slope, -0.5, 1e-3);
}

TEST(VerifyOdi, EnvelopeSeriesEquality) {
  const OdiParams p = basic_form(1.5, 0.5);
  const DecayEnvelope env{2.0, p.y_exponent(), 0.0, 1.0};
  const FunctionalSeries y = envelope_series(env, 41, 0.05);
  OdiParams a = p;
  a.mode = RateMode::analytic;
  a.rate = env.k;
  const OdiReport r = verify_odi(y, {}, a, 0.0);
  EXPECT_TRUE(r.holds);
  const OdiReport f = verify_odi(y, {}, p, 0.0);
  ASSERT_TRUE(f.measured_rate.has_value());
  EXPECT_GE(*f.measured_rate, (1.0 - 1e-6) * env.k);
  EXPECT_TRUE(f.holds);
}

TEST(VerifyOdi, OverstatedRateFails) {
  const OdiParams p = basic_form(1.5, 0.5);
  const DecayEnvelope env{2.0, p.y_exponent(), 0.0, 1.0};
  OdiParams a = p;
  a.mode = RateMode::analytic;
  a.rate = 4.0;
  const OdiReport r = verify_odi(envelope_series(env, 41, 0.05), {}, a, 1e-2);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_GT(r.witness->value, r.witness->bound);
}

TEST(VerifyOdi, ParameterChecks) {
  OdiParams p;
  p.form = OdiForm::critical;
  p.p1 = 3.0;
  p.gamma1 = 0.5;  // δ₁ = 4/1.5 ≥ 2
  p.q1 = 1.0;
  p.beta = 0.5;
  EXPECT_THROW(p.validate(), ParameterError);
  p.p1 = 1.0;
  EXPECT_NO_THROW(p.validate());
  p.beta = 0.6;
  EXPECT_THROW(p.validate(), ParameterError);
  const FunctionalSeries two{{0.0, 1.0}, {1.0, 0.5}, "", 1.0};
  EXPECT_THROW(verify_odi(two, {}, basic_form(1.5, 0.5), 0.0), DomainError);
}

TEST(VerifyOdi, DeltaExponents) {
  OdiParams p;
  p.form = OdiForm::supercritical;
  p.p1 = 1.0;
  p.q1 = 1.0;
  p.gamma1 = 0.75;
  p.beta = 0.75;
  p.dimension = 1;
  EXPECT_NEAR(p.delta1(), 2.0 / 1.75, 1e-15);
  EXPECT_EQ(p.delta2(), 1.0);
  ASSERT_EQ(p.z_exponents().size(), 1u);
  EXPECT_NEAR(p.z_exponents()[0], 0.5, 1e-15);
  p.dimension = 3;
  p.gamma1 = 0.1;  // δ₁ = 2/1.1 > 3/2
  EXPECT_NEAR(p.delta2(), p.delta1() * 3.0 / (3.0 + p.delta1()), 1e-15);
}

TEST(VerifyOdi, CriticalRate) {
  EXPECT_NEAR(analytic_rate_critical(1.0, 2.0, 1.5, 0.5), 2.0 * 2.0 / (2.25 * 0.25), 1e-14);
  EXPECT_THROW(analytic_rate_critical(1.0, 0.0, 1.5, 0.5), ParameterError);
}

TEST(GeneralizedEnvelope, ReducesToPowerLaw) {
  const DecayEnvelope env{1.3, 2.5, 0.5, 3.0};
  std::vector<double> times;
  for (int i = 0; i <= 20; ++i) times.push_back(0.5 + 0.5 * i);
  const FunctionalSeries s =
      generalized_odi_envelope([&](double y) { return env.k * std::pow(y, env.beta); }, env.Y0, env.t0, times);
  for (std::size_t i = 0; i < times.size(); ++i)
    EXPECT_NEAR(s.values[i], envelope_value(env, times[i]), 1e-6 * env.Y0);
}

TEST(GeneralizedEnvelope, ZeroRateAndLogRate) {
  const std::vector<double> times{0.0, 1.0, 2.0, 5.0};
  for (double v : generalized_odi_envelope([](double) { return 0.0; }, 0.7, 0.0, times).values)
    EXPECT_EQ(v, 0.7);
  const FunctionalSeries s =
      generalized_odi_envelope([](double y) { return y * std::abs(std::log(y)); }, 0.5, 0.0, times);
  for (std::size_t i = 1; i < s.values.size(); ++i) {
    EXPECT_LT(s.values[i], s.values[i - 1]);
    EXPECT_GT(s.values[i], 0.0);
  }
  // y|ln y| with y < 1 has the closed form y(t) = exp(ln(y₀)e^{t}).
  EXPECT_NEAR(s.values.back(), std::exp(std::log(0.5) * std::exp(5.0)), 1e-8);
  EXPECT_THROW(generalized_odi_envelope([](double) { return -1.0; }, 0.5, 0.0, times), DomainError);
}

TEST(Poincare, HalfBoundHolds) {
  const PoincareCheck q = validate_poincare_1d(0.5, 1.5, 100, 42);
  EXPECT_TRUE(q.holds);
  EXPECT_LT(q.max_ratio, 0.5);
  const PoincareCheck inf = validate_poincare_1d(0.5, std::numeric_limits<double>::infinity(), 100, 42);
  EXPECT_TRUE(inf.holds);
  EXPECT_FALSE(validate_poincare_1d(0.1, 2.0, 100, 42).holds);
  EXPECT_EQ(validate_poincare_1d(0.5, 2.0, 20, 9).max_ratio, validate_poincare_1d(0.5, 2.0, 20, 9).max_ratio);
}
