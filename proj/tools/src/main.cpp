#include "config.hpp"
#include "runner.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace cli = degdiff::cli;

namespace {

int run_kind(cli::Kind kind, const std::string& config_path, const std::string& out_dir,
             const std::optional<std::uint64_t>& seed, bool quiet) {
  cli::RunOptions options;
  options.out_dir = out_dir;
  options.seed = seed;
  options.quiet = quiet;
  cli::json config = cli::json::object();
  cli::Outcome out;
  try {
    if (!config_path.empty()) config = cli::load_config(config_path);
  } catch (const cli::ConfigError& e) {
    cli::json err = {{"kind", std::string(cli::to_string(kind))},
                     {"status", "validation-error"},
                     {"errors", e.messages()}};
    std::cerr << err.dump(2) << '\n';
    return cli::exit_validation;
  }
  out = cli::run(kind, config, options);
  if (out.exit_code == cli::exit_validation || out.exit_code == cli::exit_runtime) {
    std::cerr << out.results.dump(2) << '\n';
    return out.exit_code;
  }
  if (!quiet) {
    for (const cli::Check& c : out.checks)
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    if (out.results.contains("rows"))
      for (const auto& row : out.results.at("rows"))
        std::cout << "row " << row.at("index") << ' ' << row.at("parameters").dump() << ": "
                  << row.at("status").get<std::string>() << '\n';
    std::cout << "results written to " << (options.out_dir / "results.json").string() << '\n';
  }
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degenerate diffusion laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "degdiff-out";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  std::optional<cli::Kind> chosen;

  const std::map<cli::Kind, std::string> descriptions = {
      {cli::Kind::analyze_coefficient, "Check the propagation conditions on a coefficient"},
      {cli::Kind::solve, "Solve the initial-boundary value problem"},
      {cli::Kind::front, "Track the support of a solution"},
      {cli::Kind::stability, "Verify Lyapunov decay envelopes and differential inequalities"},
      {cli::Kind::counterexample, "Reproduce the infinite-speed self-similar solution"},
      {cli::Kind::sweep, "Run an experiment over a parameter grid"}};

  for (cli::Kind kind : cli::all_kinds()) {
    CLI::App* sub = app.add_subcommand(std::string(cli::to_string(kind)), descriptions.at(kind));
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", seed, "Seed overriding the config");
    sub->add_flag("--quiet", quiet, "Suppress the per-check summary");
    sub->callback([&chosen, kind] { chosen = kind; });
  }

  std::string schema_name;
  CLI::App* schema = app.add_subcommand("schema", "Print a shipped JSON schema, or list them");
  schema->add_option("name", schema_name, "Schema name, e.g. results/solve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::exit_validation;
  }

  if (schema->parsed()) {
    const auto& all = cli::schemas();
    if (schema_name.empty()) {
      for (const auto& [name, _] : all) std::cout << name << '\n';
      return 0;
    }
    const auto it = all.find(schema_name);
    if (it == all.end()) {
      std::cerr << "unknown schema '" << schema_name << "'\n";
      return cli::exit_validation;
    }
    std::cout << it->second;
    return 0;
  }
  return run_kind(*chosen, config_path, out_dir, seed, quiet);
}
