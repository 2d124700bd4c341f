#include "runner.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using degdiff::cli::json;
namespace cli = degdiff::cli;

namespace {

cli::RunOptions in_memory() {
  cli::RunOptions o;
  o.write_files = false;
  o.quiet = true;
  return o;
}

json basic_stability(double gamma, double m) {
  return {{"model", {{"K", 1.0}, {"gamma", gamma}, {"m", m}}},
          {"mesh", {{"geometry", "interval"}, {"n", 101}, {"x_lo", 0.0}, {"x_hi", 1.0}}},
          {"initial", {{"kind", "bump"}, {"center", 0.5}, {"width", 0.6}, {"height", 1.0}}},
          {"t_end", 0.5},
          {"output_times", {{"count", 10}}},
          {"poincare_samples", 20}};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST(Runner, KindNames) {
  for (cli::Kind k : cli::all_kinds()) EXPECT_EQ(cli::kind_from_string(cli::to_string(k)), k);
  EXPECT_FALSE(cli::kind_from_string("schema").has_value());
}

TEST(Runner, EmptyConfigListsMissingFields) {
  const cli::Outcome o = cli::run(cli::Kind::solve, json::object(), in_memory());
  EXPECT_EQ(o.exit_code, cli::exit_validation);
  const auto errors = o.results.at("errors");
  ASSERT_EQ(errors.size(), 4u);
  EXPECT_EQ(errors[0], "missing field 'coefficient'");
  EXPECT_EQ(o.results.at("status"), "validation-error");
}

TEST(Runner, ValidationPrecedesComputation) {
  json cfg = basic_stability(0.5, 1.5);
  cfg["mesh"]["n"] = 2;
  cfg["t_end"] = -1.0;
  const cli::Outcome o = cli::run(cli::Kind::stability, cfg, in_memory());
  EXPECT_EQ(o.exit_code, cli::exit_validation);
  EXPECT_EQ(o.results.at("errors").size(), 2u);
}

TEST(Runner, MismatchedKindRejected) {
  const cli::Outcome o = cli::run(cli::Kind::front, {{"kind", "solve"}}, in_memory());
  EXPECT_EQ(o.exit_code, cli::exit_validation);
}

TEST(Runner, AnalyzePowerLaw) {
  const json cfg = {{"coefficient", {{"family", "power-law"}, {"params", {{"k", 1.0}, {"rho", 2.0}}}}},
                    {"expect", {{"test1", "satisfied"}}}};
  const cli::Outcome o = cli::run(cli::Kind::analyze_coefficient, cfg, in_memory());
  ASSERT_EQ(o.exit_code, cli::exit_ok);
  const json& t1 = o.results.at("reports").at(0);
  EXPECT_EQ(t1.at("condition"), "test1");
  EXPECT_EQ(t1.at("verdict"), "satisfied");
  EXPECT_NEAR(t1.at("constants").at("limsup_estimate").get<double>(), 0.5, 1e-8);
  EXPECT_TRUE(o.files.count("ai.csv"));
  EXPECT_TRUE(o.files.count("plot.svg"));
}

TEST(Runner, FailedExpectationExitsWithCheckFailure) {
  const json cfg = {{"coefficient", {{"family", "counterexample"}, {"params", {{"lambda", 3.0}, {"N", 2}}}}},
                    {"expect", {{"test1", "satisfied"}}}};
  EXPECT_EQ(cli::run(cli::Kind::analyze_coefficient, cfg, in_memory()).exit_code, cli::exit_check_failed);
}

TEST(Runner, Counterexample) {
  const cli::Outcome o = cli::run(cli::Kind::counterexample, {{"lambda", 3.0}, {"N", 2}}, in_memory());
  ASSERT_EQ(o.exit_code, cli::exit_ok);
  EXPECT_LT(o.results.at("residual").at("max_relative").get<double>(), 1e-10);
  EXPECT_EQ(o.results.at("test1").at("verdict"), "violated");
}

TEST(Runner, RuntimeErrorFromModule) {
  json cfg = {{"coefficient", {{"family", "power-law"}, {"params", {{"k", 1e4}, {"rho", 0.0}}}}},
              {"mesh", {{"geometry", "interval"}, {"n", 2001}, {"x_lo", 0.0}, {"x_hi", 1.0}}},
              {"initial", {{"kind", "sine"}, {"k", 1}, {"amplitude", 1.0}}},
              {"t_end", 1.0}};
  const cli::Outcome o = cli::run(cli::Kind::solve, cfg, in_memory());
  EXPECT_EQ(o.exit_code, cli::exit_runtime);
  EXPECT_EQ(o.results.at("status"), "runtime-error");
}

TEST(Runner, StabilityBasicModelPasses) {
  const cli::Outcome o = cli::run(cli::Kind::stability, basic_stability(0.5, 1.5), in_memory());
  ASSERT_EQ(o.exit_code, cli::exit_ok) << o.results.dump(2);
  EXPECT_TRUE(o.results.at("envelope_check").at("dominated").get<bool>());
  EXPECT_NEAR(o.results.at("analytic_rate").at("k1").get<double>(), 12.0, 1e-12);
}

TEST(Runner, SweepRowsAndFailures) {
  json cfg = {{"experiment", "stability"}, {"base", basic_stability(0.5, 2.0)},
              {"grid", {{"/model/gamma", {0.25, 0.5, 0.75, 1.0}}}}};
  const cli::Outcome o = cli::run(cli::Kind::sweep, cfg, in_memory());
  EXPECT_EQ(o.exit_code, cli::exit_ok);
  const json& rows = o.results.at("rows");
  ASSERT_EQ(rows.size(), 4u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(rows[i].at("status"), "ok") << i;
  EXPECT_EQ(rows[3].at("exit_code"), cli::exit_validation);
  EXPECT_EQ(o.results.at("failed_rows"), 1);
}

TEST(Runner, SweepAllFailingRowsExitNonzero) {
  json cfg = {{"experiment", "stability"}, {"base", basic_stability(0.5, 2.0)},
              {"grid", {{"/model/gamma", {1.0, 1.5}}}}};
  EXPECT_EQ(cli::run(cli::Kind::sweep, cfg, in_memory()).exit_code, cli::exit_validation);
}

TEST(Runner, EmptySweepGrid) {
  json cfg = {{"experiment", "solve"}, {"base", json::object()}, {"grid", json::object()}};
  const cli::Outcome o = cli::run(cli::Kind::sweep, cfg, in_memory());
  EXPECT_EQ(o.exit_code, cli::exit_ok);
  EXPECT_TRUE(o.results.at("rows").empty());
  json empty_list = {{"experiment", "solve"}, {"base", json::object()}, {"grid", {{"/t_end", json::array()}}}};
  EXPECT_EQ(cli::run(cli::Kind::sweep, empty_list, in_memory()).results.at("row_count"), 0);
}

TEST(Runner, DeterministicFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "degdiff-runner-determinism";
  std::filesystem::remove_all(dir);
  cli::RunOptions a, b;
  a.out_dir = dir / "a";
  b.out_dir = dir / "b";
  a.seed = b.seed = 11;
  json cfg = basic_stability(0.5, 1.5);
  ASSERT_EQ(cli::run(cli::Kind::stability, cfg, a).exit_code, cli::exit_ok);
  ASSERT_EQ(cli::run(cli::Kind::stability, cfg, b).exit_code, cli::exit_ok);
  for (const char* f : {"results.json", "series.csv", "plot.svg"})
    EXPECT_EQ(slurp(a.out_dir / f), slurp(b.out_dir / f)) << f;
  EXPECT_EQ(json::parse(slurp(a.out_dir / "results.json")).at("seed"), 11);
  std::filesystem::remove_all(dir);
}

TEST(Runner, SchemasEmbedded) {
  const auto& s = cli::schemas();
  EXPECT_TRUE(s.count("error"));
  for (cli::Kind k : cli::all_kinds()) {
    const std::string kind(cli::to_string(k));
    ASSERT_TRUE(s.count("results/" + kind)) << kind;
    ASSERT_TRUE(s.count("config/" + kind)) << kind;
    EXPECT_TRUE(json::parse(s.at("results/" + kind)).is_object());
  }
}
