#include "degdiff/errors.hpp"
#include "degdiff/serialization.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace degdiff;

TEST(Serialization, CoefficientRoundTrip) {
  for (const Coefficient& c :
       {Coefficient::power_law(2.0, 0.5), Coefficient::constant(3.0), make_counterexample(3.0, 2),
        Coefficient::tabulated({0.0, 1.0, 2.0}, {0.0, 1.0, 1.5}, 0.5)}) {
    const json j = coefficient_to_json(c);
    const Coefficient back = coefficient_from_json(j);
    EXPECT_EQ(coefficient_to_json(back), j);
    for (double s : {0.0, 0.01, 0.7, 3.0}) EXPECT_EQ(back(s), c(s));
  }
}

TEST(Serialization, CounterexampleSpliceOptions) {
  const json j = {{"family", "counterexample"}, {"params", {{"lambda", 3.0}, {"N", 2}, {"log_splice", 4.0}}}};
  const auto& ce = std::get<Counterexample>(coefficient_from_json(j).params());
  EXPECT_NEAR(ce.u_star, std::exp(-4.0), 1e-16);
}

TEST(Serialization, MissingFieldsNamed) {
  try {
    coefficient_from_json({{"family", "power-law"}, {"params", {{"k", 1.0}}}});
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("rho"), std::string::npos);
  }
  EXPECT_THROW(coefficient_from_json({{"family", "bogus"}}), ParameterError);
  EXPECT_THROW(weight_from_json({{"family", "power"}}), ParameterError);
  EXPECT_THROW(mesh_from_json({{"geometry", "torus"}, {"n", 5}}), ParameterError);
}

TEST(Serialization, WeightMeshProfileRoundTrip) {
  const WeightPair w = WeightPair::power(0.25, 2.0);
  EXPECT_EQ(weight_to_json(weight_from_json(weight_to_json(w))), weight_to_json(w));
  EXPECT_EQ(weight_to_json(WeightPair::custom("log1p")).at("h"), "log1p");
  const Mesh r = Mesh::radial(2.0, 3, 41);
  const Mesh back = mesh_from_json(mesh_to_json(r));
  EXPECT_EQ(back.geometry, Mesh::Geometry::radial);
  EXPECT_EQ(back.dimension, 3);
  EXPECT_EQ(back.x_hi, 2.0);
  const InitialProfile p = SineProfile{3, 0.5};
  EXPECT_EQ(profile_to_json(profile_from_json(profile_to_json(p))), profile_to_json(p));
}

TEST(Serialization, TrajectoryRoundTripAndCsv) {
  const Mesh m = Mesh::interval(0.0, 1.0, 11);
  const auto u0 = sample_profile(BumpProfile{0.5, 0.4, 1.0}, m);
  const std::vector<double> out{0.01};
  const Trajectory t = solve_ibvp(Coefficient::power_law(1.0, 1.0), m, u0, 0.02, out);
  const Trajectory back = trajectory_from_json(trajectory_to_json(t));
  EXPECT_EQ(back.times, t.times);
  EXPECT_EQ(back.states, t.states);
  std::ostringstream os;
  write_trajectory_csv(os, t);
  const std::string csv = os.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,x,u");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 * 11);
}

TEST(Serialization, SeriesCsvWithEnvelope) {
  const FunctionalSeries s{{0.0, 1.0}, {1.0, 0.4}, "Y", 2.0};
  std::ostringstream os;
  write_series_csv(os, s, DecayEnvelope{1.0, 2.0, 0.0, 1.0});
  EXPECT_EQ(os.str(), "t,Y,envelope,margin\n0,1,1,0\n1,0.40000000000000002,0.5,0.099999999999999978\n");
  std::ostringstream bare;
  write_series_csv(bare, s);
  EXPECT_EQ(bare.str(), "t,Y,envelope,margin\n0,1,,\n1,0.40000000000000002,,\n");
}

TEST(Serialization, OdiAndAssumptionParams) {
  const json j = {{"form", "multi-term"}, {"p1", 1.0}, {"q1", 1.0}, {"gamma1", 0.75}, {"betas", {1.0, 0.6}},
                  {"N", 1}, {"rate", 2.5}};
  const OdiParams p = odi_params_from_json(j);
  EXPECT_EQ(p.form, OdiForm::multi_term);
  EXPECT_EQ(p.mode, RateMode::analytic);
  EXPECT_EQ(p.rate, 2.5);
  EXPECT_EQ(odi_params_from_json(odi_params_to_json(p)).betas, p.betas);
  const AssumptionParams a = assumption_params_from_json({{"id", "no-h-prime-2"}, {"gamma1", 1.0}, {"beta", 1.0}});
  EXPECT_EQ(a.id, AssumptionId::no_h_prime_2);
  EXPECT_EQ(assumption_params_to_json(a).at("id"), "no-h-prime-2");
  EXPECT_THROW(assumption_params_from_json({{"id", "nope"}}), ParameterError);
}

TEST(Serialization, ReportJson) {
  const ConditionReport r = check_test1(make_counterexample(3.0, 2), LogGrid{1e-12, 1.0, 10});
  const json j = r;
  EXPECT_EQ(j.at("verdict"), "violated");
  EXPECT_TRUE(j.at("witness").contains("s"));
  const ConditionReport back = j.get<ConditionReport>();
  EXPECT_EQ(back.verdict, r.verdict);
  EXPECT_EQ(back.witness->s, r.witness->s);
}
