#include "runner.hpp"

#include "config.hpp"
#include "svg.hpp"

#include "degdiff/coefficients.hpp"
#include "degdiff/errors.hpp"
#include "degdiff/fit.hpp"
#include "degdiff/oracles.hpp"
#include "degdiff/pde.hpp"
#include "degdiff/serialization.hpp"
#include "degdiff/stability.hpp"
#include "degdiff/weights.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

namespace degdiff::cli {

std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::analyze_coefficient: return "analyze-coefficient";
    case Kind::solve: return "solve";
    case Kind::front: return "front";
    case Kind::stability: return "stability";
    case Kind::counterexample: return "counterexample";
    case Kind::sweep: return "sweep";
  }
  return "solve";
}

const std::vector<Kind>& all_kinds() {
  static const std::vector<Kind> kinds = {Kind::analyze_coefficient, Kind::solve,
                                          Kind::front,               Kind::stability,
                                          Kind::counterexample,      Kind::sweep};
  return kinds;
}

std::optional<Kind> kind_from_string(std::string_view s) {
  for (Kind k : all_kinds())
    if (to_string(k) == s) return k;
  return std::nullopt;
}

json load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file '" + path.string() + "'"});
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({"config file '" + path.string() + "' is not valid JSON: " + e.what()});
  }
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string short_num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

json checks_to_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const Check& c : checks) out.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return out;
}

struct Result {
  json body = json::object();
  std::vector<Check> checks;
  std::map<std::string, std::string> files;
};

// ---------------------------------------------------------------- solve

struct SolveSpec {
  std::optional<Coefficient> coeff;
  std::optional<Mesh> mesh;
  std::optional<InitialProfile> initial;
  double t_end = 1.0;
  std::vector<double> outputs;
  SolverOptions solver;
};

SolveSpec parse_solve(const json& cfg, Collector& c, std::optional<Coefficient> preset) {
  SolveSpec s;
  if (preset) {
    s.coeff = preset;
  } else if (c.require(cfg, {"coefficient"}, "")) {
    s.coeff = c.attempt("coefficient", [&] { return coefficient_from_json(cfg.at("coefficient")); });
  }
  c.require(cfg, {"mesh", "initial", "t_end"}, "");
  if (cfg.contains("mesh")) s.mesh = c.attempt("mesh", [&] { return mesh_from_json(cfg.at("mesh")); });
  if (cfg.contains("initial"))
    s.initial = c.attempt("initial", [&] { return profile_from_json(cfg.at("initial")); });
  if (cfg.contains("t_end")) {
    c.attempt("t_end", [&] {
      if (!cfg.at("t_end").is_number()) throw ParameterError("t_end must be a number");
      s.t_end = cfg.at("t_end").get<double>();
      if (!(s.t_end > 0.0)) throw ParameterError("t_end must be positive");
      s.outputs = parse_output_times(cfg.value("output_times", json()), s.t_end);
      return 0;
    });
  }
  c.attempt("cfl", [&] {
    s.solver.cfl = number_or(cfg, "cfl", s.solver.cfl);
    if (!(s.solver.cfl > 0.0 && s.solver.cfl <= 0.5)) throw ParameterError("cfl must lie in (0, 0.5]");
    return 0;
  });
  return s;
}

Trajectory run_solver(const SolveSpec& s) {
  const std::vector<double> u0 = sample_profile(*s.initial, *s.mesh);
  return solve_ibvp(*s.coeff, *s.mesh, u0, s.t_end, s.outputs, s.solver);
}

json trajectory_summary(const Trajectory& traj) {
  const std::vector<double> qw = traj.mesh.quadrature_weights();
  json rows = json::array();
  for (std::size_t m = 0; m < traj.times.size(); ++m) {
    const auto& u = traj.states[m];
    double mass = 0.0;
    for (int i = 0; i < traj.mesh.n; ++i) mass += qw[i] * u[i];
    json support = nullptr;
    for (int i = 0; i < traj.mesh.n; ++i)
      if (u[i] > 0.0) {
        if (support.is_null()) support = {traj.mesh.x(i), traj.mesh.x(i)};
        support[1] = traj.mesh.x(i);
      }
    rows.push_back({{"t", traj.times[m]},
                    {"max", *std::max_element(u.begin(), u.end())},
                    {"min", *std::min_element(u.begin(), u.end())},
                    {"mass", mass},
                    {"support", support}});
  }
  return rows;
}

std::vector<Check> solver_checks(const Trajectory& traj) {
  double min_u = 0.0, worst_increase = 0.0, boundary = 0.0;
  double prev_max = -1.0;
  for (const auto& u : traj.states) {
    min_u = std::min(min_u, *std::min_element(u.begin(), u.end()));
    const double mx = *std::max_element(u.begin(), u.end());
    if (prev_max >= 0.0) worst_increase = std::max(worst_increase, mx - prev_max);
    prev_max = mx;
    for (int i = 0; i < traj.mesh.n; ++i)
      if (traj.mesh.is_boundary(i)) boundary = std::max(boundary, std::abs(u[i]));
  }
  return {{"positivity", min_u >= 0.0, "min u = " + short_num(min_u)},
          {"maximum-principle", worst_increase <= 0.0, "largest max-norm increase = " + short_num(worst_increase)},
          {"dirichlet-boundary", boundary == 0.0, "max |u| on boundary = " + short_num(boundary)}};
}

std::string profiles_plot(const Trajectory& traj, const std::string& title) {
  std::vector<PlotSeries> series;
  const std::size_t nt = traj.times.size();
  const std::size_t stride = std::max<std::size_t>(1, (nt + 4) / 5);
  const std::vector<double> x = traj.mesh.nodes();
  for (std::size_t m = 0; m < nt; m += stride)
    series.push_back({"t = " + short_num(traj.times[m]), x, traj.states[m], false});
  if ((nt - 1) % stride != 0) series.push_back({"t = " + short_num(traj.times.back()), x, traj.states.back(), false});
  return render_svg({title, traj.mesh.geometry == Mesh::Geometry::radial ? "r" : "x", "u"}, series);
}

Result run_solve(const json& cfg) {
  Collector c;
  const SolveSpec spec = parse_solve(cfg, c, std::nullopt);
  c.finish();
  const Trajectory traj = run_solver(spec);
  Result r;
  r.body["coefficient"] = coefficient_to_json(*spec.coeff);
  r.body["mesh"] = mesh_to_json(*spec.mesh);
  r.body["initial"] = profile_to_json(*spec.initial);
  r.body["times"] = traj.times;
  r.body["summary"] = trajectory_summary(traj);
  r.body["step_log"] = trajectory_to_json(traj).at("step_log");
  r.checks = solver_checks(traj);
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  r.files["trajectory.csv"] = csv.str();
  r.files["trajectory.json"] = trajectory_to_json(traj).dump() + "\n";
  if (flag_or(cfg, "plot", true)) r.files["plot.svg"] = profiles_plot(traj, "Solution profiles");
  return r;
}

// ---------------------------------------------------------------- front

Result run_front(const json& cfg) {
  Collector c;
  const std::string source = cfg.value("source", std::string("solver"));
  std::optional<SolveSpec> spec;
  std::optional<SelfSimilarSolution> sol;
  std::optional<Mesh> ss_mesh;
  std::vector<double> ss_times;
  if (source == "solver") {
    spec = parse_solve(cfg, c, std::nullopt);
  } else if (source == "selfsimilar") {
    if (c.require(cfg, {"selfsimilar"}, "")) {
      const json& ss = cfg.at("selfsimilar");
      if (c.require(ss, {"lambda", "N", "mesh", "times"}, "selfsimilar")) {
        sol = c.attempt("selfsimilar", [&] {
          return SelfSimilarSolution(ss.at("lambda").get<double>(), ss.at("N").get<int>());
        });
        ss_mesh = c.attempt("selfsimilar.mesh", [&] { return mesh_from_json(ss.at("mesh")); });
        c.attempt("selfsimilar.times", [&] {
          ss_times = ss.at("times").get<std::vector<double>>();
          if (ss_times.empty() || ss_times.front() != 0.0) ss_times.insert(ss_times.begin(), 0.0);
          return 0;
        });
      }
    }
  } else {
    c.add("source must be 'solver' or 'selfsimilar'");
  }
  Interval ball;
  double epsilon = 0.5;
  std::optional<double> eps_supp;
  if (c.require(cfg, {"ball"}, "")) {
    c.attempt("ball", [&] {
      const auto b = cfg.at("ball").get<std::vector<double>>();
      if (b.size() != 2) throw ParameterError("ball must be [lo, hi]");
      ball = {b[0], b[1]};
      return 0;
    });
  }
  c.attempt("epsilon", [&] {
    epsilon = number_or(cfg, "epsilon", 0.5);
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0,1)");
    if (cfg.contains("eps_supp")) eps_supp = number_or(cfg, "eps_supp", 0.0);
    return 0;
  });
  c.finish();

  const Trajectory traj = spec ? run_solver(*spec) : sample_selfsimilar(*sol, *ss_mesh, ss_times);
  FrontReport rep;
  try {
    rep = detect_front(traj, ball, epsilon, eps_supp);
  } catch (const DomainError& e) {
    throw ConfigError({std::string("ball: ") + e.what()});
  }
  Result r;
  r.body["source"] = source;
  r.body["front"] = front_report_to_json(rep);
  if (spec) r.checks = solver_checks(traj);
  if (cfg.contains("expect")) {
    const std::string want = cfg.at("expect").get<std::string>();
    r.checks.push_back({"expected-verdict", want == to_string(rep.verdict),
                        "verdict " + std::string(to_string(rep.verdict)) + ", expected " + want});
  }
  std::ostringstream csv;
  csv << "t,support_lo,support_hi,shrunk_ball_max\n";
  std::vector<double> t_pts, lo_pts, hi_pts;
  for (std::size_t m = 0; m < traj.times.size(); ++m) {
    const auto& runs = rep.support.front()[m];
    double mx = 0.0;
    for (int i = 0; i < traj.mesh.n; ++i) {
      const double x = traj.mesh.x(i);
      if (x >= rep.shrunk_ball.lo && x <= rep.shrunk_ball.hi) mx = std::max(mx, traj.states[m][i]);
    }
    csv << num(traj.times[m]) << ',';
    if (runs.empty()) {
      csv << ",,";
    } else {
      csv << num(runs.front().lo) << ',' << num(runs.back().hi) << ',';
      t_pts.push_back(traj.times[m]);
      lo_pts.push_back(runs.front().lo);
      hi_pts.push_back(runs.back().hi);
    }
    csv << num(mx) << '\n';
  }
  r.files["support.csv"] = csv.str();
  if (flag_or(cfg, "plot", true))
    r.files["plot.svg"] = render_svg({"Support above eps_supp", "t", "x"},
                                     {{"lower edge", t_pts, lo_pts, false}, {"upper edge", t_pts, hi_pts, false}});
  return r;
}

// ---------------------------------------------------------------- stability

Result run_stability(const json& cfg, std::uint64_t seed) {
  Collector c;
  std::optional<Coefficient> coeff;
  std::optional<WeightPair> weight;
  std::optional<BasicRate> rate;
  double exponent = 1.0, c0 = 0.5, gamma = 0.0, m = 2.0;
  const bool basic = cfg.contains("model");
  if (basic) {
    const json& model = cfg.at("model");
    if (c.require(model, {"K", "gamma", "m"}, "model")) {
      c.attempt("model", [&] {
        const double K = model.at("K").get<double>();
        gamma = model.at("gamma").get<double>();
        m = model.at("m").get<double>();
        c0 = number_or(model, "c0", 0.5);
        coeff = basic_model_coefficient(K, gamma);
        rate = analytic_rate_basic(K, gamma, m, c0);
        weight = WeightPair::power(0.0);
        exponent = m;
        return 0;
      });
    }
  } else if (c.require(cfg, {"weight", "exponent"}, "")) {
    weight = c.attempt("weight", [&] { return weight_from_json(cfg.at("weight")); });
    c.attempt("exponent", [&] {
      exponent = cfg.at("exponent").get<double>();
      if (!(exponent >= 1.0)) throw ParameterError("exponent must be >= 1");
      return 0;
    });
  }
  SolveSpec spec = parse_solve(cfg, c, basic ? coeff : std::nullopt);
  if (basic && !coeff) spec.coeff.reset();
  std::optional<DecayEnvelope> env_spec;
  if (cfg.contains("envelope"))
    env_spec = c.attempt("envelope", [&] {
      const json& e = cfg.at("envelope");
      return DecayEnvelope{e.at("k").get<double>(), e.at("beta").get<double>(), number_or(e, "t0", 0.0), 1.0};
    });
  double slack = 0.05, monotone_rel = 1e-10, odi_slack = 1e-2;
  int poincare_samples = 200;
  c.attempt("tolerances", [&] {
    slack = number_or(cfg, "slack", slack);
    monotone_rel = number_or(cfg, "monotone_tolerance", monotone_rel);
    odi_slack = number_or(cfg, "odi_slack", odi_slack);
    poincare_samples = integer_or(cfg, "poincare_samples", poincare_samples);
    if (!(slack >= 0.0 && monotone_rel >= 0.0 && odi_slack >= 0.0))
      throw ParameterError("slack values must be nonnegative");
    return 0;
  });
  std::optional<OdiParams> odi;
  if (cfg.contains("odi")) odi = c.attempt("odi", [&] { return odi_params_from_json(cfg.at("odi")); });
  c.finish();

  const Trajectory traj = run_solver(spec);
  const FunctionalSeries Y = compute_Y(traj, *weight, exponent);
  Result r;
  r.checks = solver_checks(traj);
  r.body["coefficient"] = coefficient_to_json(*spec.coeff);
  r.body["weight"] = weight_to_json(*weight);
  r.body["series"] = series_to_json(Y);

  std::optional<DecayEnvelope> env;
  if (rate) env = DecayEnvelope{rate->k1, rate->beta, 0.0, Y.values.front()};
  if (env_spec) env = DecayEnvelope{env_spec->k, env_spec->beta, env_spec->t0, Y.values.front()};
  if (env && env->t0 != 0.0) {
    // Re-anchor at the output time nearest t0 from above.
    const auto it = std::lower_bound(Y.times.begin(), Y.times.end(), env->t0);
    if (it == Y.times.end()) throw ConfigError({"envelope.t0 lies beyond the last output time"});
    env->t0 = *it;
    env->Y0 = Y.values[it - Y.times.begin()];
  }

  const EnvelopeReport rep = verify_envelope(
      Y, env ? *env : DecayEnvelope{1.0, 2.0, 0.0, Y.values.front()}, slack, monotone_rel * Y.values.front());
  json rep_json = envelope_report_to_json(rep);
  if (!env) {
    rep_json.erase("dominated");
    rep_json.erase("max_ratio");
    rep_json.erase("dominance_witness");
    rep_json.erase("expected_tail_exponent");
  }
  r.body["envelope_check"] = rep_json;
  r.checks.push_back({"monotone", rep.monotone, "largest increase = " + short_num(rep.max_increase)});
  r.checks.push_back({"zero-persistence", rep.zero_persists, "Y stays 0 after first vanishing"});
  if (env) {
    r.body["envelope"] = envelope_to_json(*env);
    r.checks.push_back({"envelope-dominance", rep.dominated,
                        "max Y/envelope = " + short_num(rep.max_ratio) + ", slack " + short_num(slack)});
  }
  if (rate) {
    r.body["analytic_rate"] = {{"k1", rate->k1}, {"beta", rate->beta}, {"c0", c0}};
    json pc = json::array();
    for (double q : {2.0 * m / (m + gamma), std::numeric_limits<double>::infinity()}) {
      const PoincareCheck p = validate_poincare_1d(c0, q, poincare_samples, seed);
      const bool inf = std::isinf(q);
      pc.push_back({{"q", inf ? json("inf") : json(q)}, {"max_ratio", p.max_ratio}, {"samples", p.samples},
                    {"holds", p.holds}});
      r.checks.push_back({inf ? "poincare-sup-norm" : "poincare-q-norm", p.holds,
                          "max ||w||/||w'|| = " + short_num(p.max_ratio) + " vs c0 = " + short_num(c0)});
    }
    r.body["poincare"] = pc;
  }

  std::ostringstream csv;
  write_series_csv(csv, Y, env);
  r.files["series.csv"] = csv.str();

  if (odi) {
    const double y_exp = odi->form == OdiForm::basic ? odi->m : odi->p1 + 1.0;
    const FunctionalSeries Yo = y_exp == exponent ? Y : compute_Y(traj, *weight, y_exp);
    std::vector<FunctionalSeries> zs;
    for (double p : odi->z_exponents()) zs.push_back(compute_functional(traj, *weight, p));
    const OdiReport orep = verify_odi(Yo, zs, *odi, odi_slack);
    json oj = odi_report_to_json(orep);
    oj["params"] = odi_params_to_json(*odi);
    json zj = json::array();
    std::ostringstream zcsv;
    zcsv << "t,Y";
    for (std::size_t k = 0; k < zs.size(); ++k) zcsv << ",Z" << k + 1;
    zcsv << '\n';
    for (std::size_t i = 0; i < Yo.times.size(); ++i) {
      zcsv << num(Yo.times[i]) << ',' << num(Yo.values[i]);
      for (const auto& z : zs) zcsv << ',' << num(z.values[i]);
      zcsv << '\n';
    }
    for (const auto& z : zs) {
      const double z0 = z.values.front();
      const double zmax = *std::max_element(z.values.begin(), z.values.end());
      const bool bounded = zmax <= z0 + 1e-10 * z0;
      zj.push_back({{"exponent", z.exponent}, {"initial", z0}, {"max", zmax}, {"bounded_by_initial", bounded}});
      r.checks.push_back({"z-bounded-by-initial", bounded,
                          "exponent " + short_num(z.exponent) + ": max " + short_num(zmax) + " vs Z(t0) " + short_num(z0)});
    }
    oj["functionals"] = zj;
    r.body["odi"] = oj;
    r.checks.push_back({"odi-holds", orep.holds,
                        "max violation " + short_num(orep.max_violation) + " vs tolerance " + short_num(orep.tolerance)});
    r.files["functionals.csv"] = zcsv.str();
  }

  if (flag_or(cfg, "plot", true)) {
    std::vector<PlotSeries> series{{"Y(t)", Y.times, Y.values, false}};
    if (env) {
      std::vector<double> ev;
      for (double t : Y.times) ev.push_back(t >= env->t0 ? envelope_value(*env, t) : NAN);
      series.push_back({"envelope", Y.times, ev, true});
    }
    r.files["plot.svg"] = render_svg({"Lyapunov functional vs envelope", "t", "Y", false, true}, series);
  }
  return r;
}

// ---------------------------------------------------------------- coefficient analysis

struct AiRow {
  double s, a, I, aI;
};

std::vector<AiRow> sample_ai(const Coefficient& coeff, const std::vector<double>& s_pts, double tol) {
  std::vector<AiRow> rows;
  for (double s : s_pts) {
    const double a = eval_a(coeff, s);
    const double I = eval_I(coeff, s, tol).value;
    rows.push_back({s, a, I, a * I});
  }
  return rows;
}

std::string ai_csv(const std::vector<AiRow>& rows) {
  std::ostringstream os;
  os << "s,abs_log_s,a,I,aI\n";
  for (const AiRow& r : rows)
    os << num(r.s) << ',' << num(std::abs(std::log(r.s))) << ',' << num(r.a) << ',' << num(r.I) << ','
       << num(r.aI) << '\n';
  return os.str();
}

std::string ai_plot(const std::vector<AiRow>& rows) {
  PlotSeries s{"a(s) I(s)", {}, {}, false};
  for (const AiRow& r : rows) {
    s.x.push_back(std::abs(std::log(r.s)));
    s.y.push_back(r.aI);
  }
  return render_svg({"a(s) I(s) against |ln s|", "|ln s|", "a I"}, {s});
}

Result run_analyze(const json& cfg) {
  Collector c;
  std::optional<Coefficient> coeff;
  if (c.require(cfg, {"coefficient"}, ""))
    coeff = c.attempt("coefficient", [&] { return coefficient_from_json(cfg.at("coefficient")); });
  LogGrid grid1{1e-12, 1.0, 10};
  Test2Options t2;
  std::vector<double> mu_grid{0.5, 1.0, 2.0, 4.0};
  double tol = 1e-10;
  bool at_inf = true;
  c.attempt("test1", [&] {
    if (cfg.contains("test1")) from_json(cfg.at("test1"), grid1);
    if (grid1.s_min > 1e-8) throw ParameterError("test1.s_min must not exceed 1e-8");
    tol = number_or(cfg, "tolerance", tol);
    at_inf = flag_or(cfg, "at_infinity", true);
    return 0;
  });
  c.attempt("test2", [&] {
    if (!cfg.contains("test2")) return 0;
    const json& j = cfg.at("test2");
    if (j.contains("mu_grid")) mu_grid = j.at("mu_grid").get<std::vector<double>>();
    t2.s_min = number_or(j, "s_min", t2.s_min);
    t2.s_max = number_or(j, "s_max", t2.s_max);
    t2.points_per_decade = integer_or(j, "points_per_decade", t2.points_per_decade);
    t2.c_floor = number_or(j, "c_floor", t2.c_floor);
    return 0;
  });
  struct AssumptionJob {
    WeightPair w;
    AssumptionParams p;
    AssumptionGrid g;
  };
  std::vector<AssumptionJob> jobs;
  if (cfg.contains("assumptions")) {
    if (!cfg.at("assumptions").is_array()) {
      c.add("assumptions must be an array");
    } else {
      int idx = 0;
      for (const json& a : cfg.at("assumptions")) {
        const std::string where = "assumptions[" + std::to_string(idx++) + "]";
        if (!c.require(a, {"weight", "params"}, where)) continue;
        auto job = c.attempt(where, [&] {
          AssumptionGrid g;
          if (a.contains("grid")) from_json(a.at("grid"), g);
          return AssumptionJob{weight_from_json(a.at("weight")), assumption_params_from_json(a.at("params")), g};
        });
        if (job) jobs.push_back(*job);
      }
    }
  }
  c.finish();

  Result r;
  r.body["coefficient"] = coefficient_to_json(*coeff);
  json reports = json::array();
  std::map<std::string, Verdict> verdicts;
  const auto add = [&](const ConditionReport& rep) {
    reports.push_back(rep);
    verdicts[rep.condition] = rep.verdict;
  };
  add(check_test1(*coeff, grid1, tol));
  add(check_test2(*coeff, mu_grid, t2));
  if (at_inf) add(check_at_infinity(*coeff, tol));
  for (const AssumptionJob& job : jobs) add(check_assumption(job.w, *coeff, job.p, job.g));
  r.body["reports"] = reports;
  if (cfg.contains("expect")) {
    for (const auto& [cond, want] : cfg.at("expect").items()) {
      const auto it = verdicts.find(cond);
      const std::string got = it == verdicts.end() ? "missing" : std::string(to_string(it->second));
      r.checks.push_back({"expect-" + cond, got == want.get<std::string>(),
                          "verdict " + got + ", expected " + want.get<std::string>()});
    }
  }
  const auto rows = sample_ai(*coeff, grid1.points(), tol);
  r.files["ai.csv"] = ai_csv(rows);
  if (flag_or(cfg, "plot", true)) r.files["plot.svg"] = ai_plot(rows);
  return r;
}

// ---------------------------------------------------------------- counterexample

Result run_counterexample(const json& cfg) {
  Collector c;
  double lambda = 3.0, splice_factor = 1.1, tol = 1e-10;
  int N = 2;
  double s_lo_factor = 1.2, s_hi = 3.0, t_lo = 0.1, t_hi = 0.9;
  int ns = 60, nt = 17, n_lo = 8, n_hi = 28;
  LogGrid grid1{1e-12, 1.0, 10};
  if (c.require(cfg, {"lambda", "N"}, "")) {
    c.attempt("lambda/N", [&] {
      lambda = cfg.at("lambda").get<double>();
      N = cfg.at("N").get<int>();
      if (!(lambda > 2.0)) throw ParameterError("lambda must exceed 2");
      if (N < 1) throw ParameterError("N must be >= 1");
      return 0;
    });
  }
  c.attempt("parameters", [&] {
    splice_factor = number_or(cfg, "splice_factor", splice_factor);
    tol = number_or(cfg, "tolerance", tol);
    const json res = cfg.value("residual", json::object());
    s_lo_factor = number_or(res, "s_lo_factor", s_lo_factor);
    s_hi = number_or(res, "s_hi", s_hi);
    ns = integer_or(res, "ns", ns);
    t_lo = number_or(res, "t_lo", t_lo);
    t_hi = number_or(res, "t_hi", t_hi);
    nt = integer_or(res, "nt", nt);
    const json fit = cfg.value("growth_fit", json::object());
    n_lo = integer_or(fit, "n_min", n_lo);
    n_hi = integer_or(fit, "n_max", n_hi);
    if (cfg.contains("test1")) from_json(cfg.at("test1"), grid1);
    if (grid1.s_min > 1e-8) throw ParameterError("test1.s_min must not exceed 1e-8");
    if (!(splice_factor > 1.0)) throw ParameterError("splice_factor must exceed 1");
    if (!(s_lo_factor > splice_factor))
      throw ParameterError("residual.s_lo_factor must exceed splice_factor so samples stay below u*");
    if (n_hi - n_lo < 2) throw ParameterError("growth_fit needs at least 3 points");
    return 0;
  });
  c.finish();

  const SelfSimilarSolution sol(lambda, N);
  const double log_splice = std::pow(splice_factor * sol.s0(), lambda);
  const Coefficient coeff = make_counterexample(lambda, N, log_splice);
  const auto pts = similarity_grid(s_lo_factor * sol.s0(), s_hi, ns, t_lo, t_hi, nt);
  const ResidualReport res = residual(sol, coeff, pts);
  const ConditionReport t1 = check_test1(coeff, grid1, tol);

  std::vector<double> s_fit;
  for (int n = n_lo; n <= n_hi; ++n) s_fit.push_back(std::exp(-double(n)));
  const auto rows = sample_ai(coeff, s_fit, tol);
  std::vector<double> lx, ly;
  for (const AiRow& row : rows) {
    lx.push_back(std::abs(std::log(row.s)));
    ly.push_back(row.aI);
  }
  const LinearFit fit = fit_line(lx, ly);

  Result r;
  r.body["coefficient"] = coefficient_to_json(coeff);
  r.body["s0"] = sol.s0();
  r.body["splice_factor"] = splice_factor;
  r.body["residual"] = residual_report_to_json(res);
  r.body["test1"] = t1;
  r.body["growth_fit"] = {{"n_min", n_lo}, {"n_max", n_hi}, {"slope", fit.slope},
                          {"intercept", fit.intercept}, {"r2", fit.r2}};
  r.checks.push_back({"residual", res.max_relative < tol,
                      "max relative residual " + short_num(res.max_relative) + " vs " + short_num(tol)});
  r.checks.push_back({"test1-violated", t1.verdict == Verdict::violated,
                      "test1 verdict " + std::string(to_string(t1.verdict))});
  r.checks.push_back({"growth-fit", fit.r2 > 0.99 && fit.slope > 0.0,
                      "slope " + short_num(fit.slope) + ", R^2 " + short_num(fit.r2)});
  r.files["ai.csv"] = ai_csv(rows);
  if (flag_or(cfg, "plot", true)) r.files["plot.svg"] = ai_plot(rows);
  return r;
}

// ---------------------------------------------------------------- sweep

Outcome run_one(Kind kind, const json& config, const RunOptions& options);

Result run_sweep(const json& cfg, const RunOptions& options, std::uint64_t seed, int& exit_code) {
  Collector c;
  std::optional<Kind> child;
  if (c.require(cfg, {"experiment", "base", "grid"}, "")) {
    child = kind_from_string(cfg.at("experiment").is_string() ? cfg.at("experiment").get<std::string>() : "");
    if (!child || *child == Kind::sweep) c.add("experiment must name a non-sweep experiment kind");
    if (!cfg.at("base").is_object()) c.add("base must be an object");
    if (!cfg.at("grid").is_object()) c.add("grid must map JSON pointers to value arrays");
  }
  std::vector<std::pair<std::string, std::vector<json>>> axes;
  if (c.ok()) {
    for (const auto& [ptr, values] : cfg.at("grid").items()) {
      if (!values.is_array()) {
        c.add("grid." + ptr + " must be an array");
        continue;
      }
      c.attempt("grid." + ptr, [&] {
        (void)json::json_pointer(ptr);
        return 0;
      });
      axes.emplace_back(ptr, std::vector<json>(values.begin(), values.end()));
    }
  }
  const int threads = [&] {
    try {
      return integer_or(cfg, "threads", static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
    } catch (const Error& e) {
      c.add(e.what());
      return 1;
    }
  }();
  c.finish();

  std::size_t rows = axes.empty() ? 0 : 1;
  for (const auto& a : axes) rows *= a.second.size();

  struct Row {
    json params;
    json config;
    Outcome outcome;
  };
  std::vector<Row> table(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    json conf = cfg.at("base");
    json params = json::object();
    std::size_t rem = i;
    for (auto a = axes.rbegin(); a != axes.rend(); ++a) {
      const json& v = a->second[rem % a->second.size()];
      rem /= a->second.size();
      conf[json::json_pointer(a->first)] = v;
      params[a->first] = v;
    }
    conf["seed"] = seed;
    table[i].params = params;
    table[i].config = conf;
  }

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < rows; i = next++) {
      RunOptions ro;
      ro.out_dir = options.out_dir / "rows" / ("row-" + std::to_string(i));
      ro.seed = seed;
      ro.quiet = true;
      ro.write_files = options.write_files;
      table[i].outcome = run_one(*child, table[i].config, ro);
    }
  };
  {
    std::vector<std::jthread> pool;
    const int n = std::max(1, std::min<int>(threads, static_cast<int>(rows)));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  }

  Result r;
  r.body["experiment"] = std::string(to_string(*child));
  json out_rows = json::array();
  std::ostringstream csv;
  csv << "index";
  for (const auto& a : axes) csv << ',' << a.first;
  csv << ",status,exit_code,failed_checks\n";
  std::size_t failed = 0;
  int first_failure = exit_ok;
  for (std::size_t i = 0; i < rows; ++i) {
    const Outcome& o = table[i].outcome;
    json failed_checks = json::array();
    for (const Check& ch : o.checks)
      if (!ch.passed) failed_checks.push_back(ch.name);
    const bool ok = o.exit_code == exit_ok;
    if (!ok) {
      ++failed;
      if (first_failure == exit_ok) first_failure = o.exit_code;
    }
    json row = {{"index", i},
                {"parameters", table[i].params},
                {"status", ok ? "ok" : (o.exit_code == exit_check_failed ? "checks-failed" : "failed")},
                {"exit_code", o.exit_code},
                {"checks", checks_to_json(o.checks)},
                {"error", o.results.contains("errors") ? o.results.at("errors") : json(nullptr)}};
    out_rows.push_back(row);
    csv << i;
    for (const auto& a : axes) csv << ',' << table[i].params.at(a.first).dump();
    csv << ',' << row.at("status").get<std::string>() << ',' << o.exit_code << ',';
    for (std::size_t k = 0; k < failed_checks.size(); ++k)
      csv << (k ? ";" : "") << failed_checks[k].get<std::string>();
    csv << '\n';
  }
  r.body["rows"] = out_rows;
  r.body["row_count"] = rows;
  r.body["failed_rows"] = failed;
  r.files["rows.csv"] = csv.str();
  exit_code = rows > 0 && failed == rows ? first_failure : exit_ok;
  return r;
}

json error_results(Kind kind, const std::string& status, const std::vector<std::string>& errors) {
  return {{"kind", std::string(to_string(kind))}, {"status", status}, {"errors", errors}};
}

void write_outputs(const Outcome& out, const RunOptions& options) {
  std::filesystem::create_directories(options.out_dir);
  const auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream f(options.out_dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (options.out_dir / name).string());
    f << content;
  };
  const bool failed = out.exit_code == exit_validation || out.exit_code == exit_runtime;
  std::filesystem::remove(options.out_dir / (failed ? "results.json" : "error.json"));
  write(failed ? "error.json" : "results.json", out.results.dump(2) + "\n");
  for (const auto& [name, content] : out.files) write(name, content);
}

Outcome run_one(Kind kind, const json& config, const RunOptions& options) {
  Outcome out;
  try {
    if (!config.is_object()) throw ConfigError({"config must be a JSON object"});
    if (config.contains("kind") && config.at("kind") != std::string(to_string(kind)))
      throw ConfigError({"config kind '" + config.at("kind").dump() + "' does not match subcommand '" +
                         std::string(to_string(kind)) + "'"});
    std::uint64_t seed = 0;
    if (options.seed) {
      seed = *options.seed;
    } else if (config.contains("seed")) {
      if (!config.at("seed").is_number_unsigned()) throw ConfigError({"seed must be a nonnegative integer"});
      seed = config.at("seed").get<std::uint64_t>();
    }
    int sweep_exit = exit_ok;
    Result r;
    switch (kind) {
      case Kind::analyze_coefficient: r = run_analyze(config); break;
      case Kind::solve: r = run_solve(config); break;
      case Kind::front: r = run_front(config); break;
      case Kind::stability: r = run_stability(config, seed); break;
      case Kind::counterexample: r = run_counterexample(config); break;
      case Kind::sweep: r = run_sweep(config, options, seed, sweep_exit); break;
    }
    const bool all_pass = std::all_of(r.checks.begin(), r.checks.end(), [](const Check& ch) { return ch.passed; });
    out.exit_code = kind == Kind::sweep ? sweep_exit : (all_pass ? exit_ok : exit_check_failed);
    out.checks = r.checks;
    out.files = std::move(r.files);
    out.results = {{"kind", std::string(to_string(kind))},
                   {"status", out.exit_code == exit_ok ? "ok" : out.exit_code == exit_check_failed ? "checks-failed" : "failed"},
                   {"seed", seed},
                   {"config", config},
                   {"checks", checks_to_json(r.checks)}};
    for (auto& [k, v] : r.body.items()) out.results[k] = v;
  } catch (const ConfigError& e) {
    out = Outcome{exit_validation, error_results(kind, "validation-error", e.messages()), {}, {}};
  } catch (const ParameterError& e) {
    out = Outcome{exit_validation, error_results(kind, "validation-error", {e.what()}), {}, {}};
  } catch (const std::exception& e) {
    out = Outcome{exit_runtime, error_results(kind, "runtime-error", {e.what()}), {}, {}};
  }
  if (options.write_files) {
    try {
      write_outputs(out, options);
    } catch (const std::exception& e) {
      out.exit_code = exit_runtime;
      out.results = error_results(kind, "runtime-error", {e.what()});
    }
  }
  return out;
}

}  // namespace

Outcome run(Kind kind, const json& config, const RunOptions& options) {
  return run_one(kind, config, options);
}

}  // namespace degdiff::cli
