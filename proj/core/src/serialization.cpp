#include "degdiff/serialization.hpp"

#include "degdiff/errors.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace degdiff {

namespace {

const json& need(const json& j, const char* key, std::string_view where) {
  if (!j.is_object()) throw ParameterError(std::string(where) + " must be an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParameterError("missing field '" + std::string(where) + "." + key + "'");
  return *it;
}

double number(const json& j, const char* key, std::string_view where) {
  const json& v = need(j, key, where);
  if (!v.is_number())
    throw ParameterError("field '" + std::string(where) + "." + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, std::string_view where) {
  if (!j.contains(key)) return fallback;
  return number(j, key, where);
}

int integer(const json& j, const char* key, std::string_view where) {
  const json& v = need(j, key, where);
  if (!v.is_number_integer())
    throw ParameterError("field '" + std::string(where) + "." + key + "' must be an integer");
  return v.get<int>();
}

std::string text(const json& j, const char* key, std::string_view where) {
  const json& v = need(j, key, where);
  if (!v.is_string())
    throw ParameterError("field '" + std::string(where) + "." + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& j, const char* key, std::string_view where) {
  const json& v = need(j, key, where);
  if (!v.is_array())
    throw ParameterError("field '" + std::string(where) + "." + key + "' must be an array");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number())
      throw ParameterError("field '" + std::string(where) + "." + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

json witness_or_null(const std::optional<Witness>& w) { return w ? json(*w) : json(nullptr); }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

json coefficient_to_json(const Coefficient& c) {
  json j;
  j["family"] = std::string(to_string(c.family()));
  if (const auto* p = std::get_if<PowerLaw>(&c.params())) {
    j["params"] = {{"k", p->k}, {"rho", p->rho}};
  } else if (const auto* ce = std::get_if<Counterexample>(&c.params())) {
    j["params"] = {{"lambda", ce->lambda}, {"N", ce->dimension}, {"u_star", ce->u_star},
                   {"a_star", ce->a_star}};
  } else {
    const auto& t = std::get<Tabulated>(c.params());
    j["params"] = {{"tail_exponent", t.tail_exponent}};
    j["s"] = t.s;
    j["a"] = t.a;
  }
  return j;
}

Coefficient coefficient_from_json(const json& j) {
  const std::string family = text(j, "family", "coefficient");
  const json empty = json::object();
  const json& params = j.contains("params") ? j.at("params") : empty;
  if (family == "power-law") {
    const double k = number(params, "k", "coefficient.params");
    const double rho = number(params, "rho", "coefficient.params");
    return rho == 0.0 ? Coefficient::constant(k) : Coefficient::power_law(k, rho);
  }
  if (family == "counterexample") {
    const double lambda = number(params, "lambda", "coefficient.params");
    const int N = integer(params, "N", "coefficient.params");
    if (params.contains("u_star")) {
      const double u_star = number(params, "u_star", "coefficient.params");
      if (params.contains("a_star"))
        return Coefficient::counterexample(lambda, N, u_star, number(params, "a_star", "coefficient.params"));
      if (!(u_star > 0.0 && u_star < 1.0)) throw ParameterError("u_star must lie in (0,1)");
      return make_counterexample(lambda, N, -std::log(u_star));
    }
    if (params.contains("log_splice"))
      return make_counterexample(lambda, N, number(params, "log_splice", "coefficient.params"));
    return make_counterexample(lambda, N);
  }
  if (family == "tabulated") {
    return Coefficient::tabulated(numbers(j, "s", "coefficient"), numbers(j, "a", "coefficient"),
                                  number_or(params, "tail_exponent", 0.0, "coefficient.params"));
  }
  throw ParameterError("unknown coefficient family '" + family + "'");
}

json weight_to_json(const WeightPair& w) {
  if (w.kind() == WeightPair::Kind::power)
    return {{"family", "power"}, {"gamma", w.gamma()}, {"scale", w.scale()}};
  return {{"family", "custom"}, {"h", w.custom_id()}};
}

WeightPair weight_from_json(const json& j) {
  const std::string family = text(j, "family", "weight");
  if (family == "power")
    return WeightPair::power(number(j, "gamma", "weight"), number_or(j, "scale", 1.0, "weight"));
  if (family == "custom") return WeightPair::custom(text(j, "h", "weight"));
  throw ParameterError("unknown weight family '" + family + "'");
}

json mesh_to_json(const Mesh& m) {
  json j = {{"geometry", std::string(to_string(m.geometry))}, {"n", m.n}};
  if (m.geometry == Mesh::Geometry::interval) {
    j["x_lo"] = m.x_lo;
    j["x_hi"] = m.x_hi;
  } else {
    j["radius"] = m.x_hi;
    j["N"] = m.dimension;
  }
  return j;
}

Mesh mesh_from_json(const json& j) {
  const std::string g = j.contains("geometry") ? text(j, "geometry", "mesh") : "interval";
  const int n = integer(j, "n", "mesh");
  if (g == "interval")
    return Mesh::interval(number_or(j, "x_lo", 0.0, "mesh"), number_or(j, "x_hi", 1.0, "mesh"), n);
  if (g == "radial") return Mesh::radial(number(j, "radius", "mesh"), integer(j, "N", "mesh"), n);
  throw ParameterError("unknown mesh geometry '" + g + "'");
}

json profile_to_json(const InitialProfile& p) {
  if (const auto* b = std::get_if<BumpProfile>(&p))
    return {{"kind", "bump"}, {"center", b->center}, {"width", b->width}, {"height", b->height}};
  if (const auto* s = std::get_if<SineProfile>(&p))
    return {{"kind", "sine"}, {"k", s->mode}, {"amplitude", s->amplitude}};
  const auto& t = std::get<TableProfile>(p);
  return {{"kind", "table"}, {"x", t.x}, {"u", t.u}};
}

InitialProfile profile_from_json(const json& j) {
  const std::string kind = text(j, "kind", "initial");
  if (kind == "bump") {
    BumpProfile b{number(j, "center", "initial"), number(j, "width", "initial"),
                  number_or(j, "height", 1.0, "initial")};
    if (!(b.width > 0.0) || !(b.height >= 0.0))
      throw ParameterError("bump needs width > 0 and height >= 0");
    return b;
  }
  if (kind == "sine")
    return SineProfile{integer(j, "k", "initial"), number_or(j, "amplitude", 1.0, "initial")};
  if (kind == "table") return TableProfile{numbers(j, "x", "initial"), numbers(j, "u", "initial")};
  throw ParameterError("unknown initial profile '" + kind + "'");
}

json trajectory_to_json(const Trajectory& t) {
  json log = json::array();
  for (const StepLogEntry& e : t.step_log)
    log.push_back({{"t_start", e.t_start}, {"t_end", e.t_end}, {"steps", e.steps},
                   {"dt_min", e.dt_min}, {"dt_max", e.dt_max}, {"cfl_max", e.cfl_max}});
  return {{"mesh", mesh_to_json(t.mesh)}, {"times", t.times}, {"states", t.states},
          {"step_log", log}};
}

Trajectory trajectory_from_json(const json& j) {
  Trajectory t;
  t.mesh = mesh_from_json(need(j, "mesh", "trajectory"));
  t.times = numbers(j, "times", "trajectory");
  t.states = need(j, "states", "trajectory").get<std::vector<std::vector<double>>>();
  if (t.states.size() != t.times.size())
    throw ParameterError("trajectory needs one state per time");
  for (const auto& s : t.states)
    if (static_cast<int>(s.size()) != t.mesh.n)
      throw ParameterError("trajectory state size does not match the mesh");
  if (j.contains("step_log"))
    for (const json& e : j.at("step_log"))
      t.step_log.push_back({e.at("t_start").get<double>(), e.at("t_end").get<double>(),
                            e.at("steps").get<long>(), e.at("dt_min").get<double>(),
                            e.at("dt_max").get<double>(), e.at("cfl_max").get<double>()});
  return t;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  os << "t,x,u\n";
  for (std::size_t m = 0; m < t.times.size(); ++m)
    for (int i = 0; i < t.mesh.n; ++i)
      os << csv_number(t.times[m]) << ',' << csv_number(t.mesh.x(i)) << ','
         << csv_number(t.states[m][i]) << '\n';
}

json envelope_to_json(const DecayEnvelope& e) {
  return {{"k", e.k}, {"beta", e.beta}, {"t0", e.t0}, {"Y0", e.Y0}};
}

DecayEnvelope envelope_from_json(const json& j) {
  DecayEnvelope e{number(j, "k", "envelope"), number(j, "beta", "envelope"),
                  number_or(j, "t0", 0.0, "envelope"), number(j, "Y0", "envelope")};
  e.validate();
  return e;
}

json series_to_json(const FunctionalSeries& s) {
  return {{"descriptor", s.descriptor}, {"exponent", s.exponent}, {"times", s.times},
          {"values", s.values}};
}

void write_series_csv(std::ostream& os, const FunctionalSeries& s,
                      const std::optional<DecayEnvelope>& env) {
  os << "t,Y,envelope,margin\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    os << csv_number(s.times[i]) << ',' << csv_number(s.values[i]) << ',';
    if (env && s.times[i] >= env->t0) {
      const double e = envelope_value(*env, s.times[i]);
      os << csv_number(e) << ',' << csv_number(e - s.values[i]);
    } else {
      os << ',';
    }
    os << '\n';
  }
}

AssumptionParams assumption_params_from_json(const json& j) {
  AssumptionParams p;
  p.id = assumption_from_string(text(j, "id", "assumption"));
  p.gamma1 = number_or(j, "gamma1", p.gamma1, "assumption");
  p.p = number_or(j, "p", p.p, "assumption");
  p.p1 = number_or(j, "p1", p.p1, "assumption");
  p.q1 = number_or(j, "q1", p.q1, "assumption");
  p.beta = number_or(j, "beta", p.beta, "assumption");
  if (j.contains("betas")) p.betas = numbers(j, "betas", "assumption");
  p.bound = number_or(j, "M", p.bound, "assumption");
  p.validate();
  return p;
}

json assumption_params_to_json(const AssumptionParams& p) {
  json j = {{"id", std::string(to_string(p.id))}, {"gamma1", p.gamma1}, {"p", p.p},
            {"p1", p.p1}, {"q1", p.q1}, {"beta", p.beta}, {"M", p.bound}};
  if (!p.betas.empty()) j["betas"] = p.betas;
  return j;
}

OdiParams odi_params_from_json(const json& j) {
  OdiParams p;
  p.form = odi_form_from_string(text(j, "form", "odi"));
  p.m = number_or(j, "m", p.m, "odi");
  p.gamma = number_or(j, "gamma", p.gamma, "odi");
  p.p1 = number_or(j, "p1", p.p1, "odi");
  p.q1 = number_or(j, "q1", p.q1, "odi");
  p.gamma1 = number_or(j, "gamma1", p.gamma1, "odi");
  p.beta = number_or(j, "beta", p.beta, "odi");
  if (j.contains("betas")) p.betas = numbers(j, "betas", "odi");
  if (j.contains("N")) p.dimension = integer(j, "N", "odi");
  if (j.contains("rate")) {
    p.mode = RateMode::analytic;
    p.rate = number(j, "rate", "odi");
  }
  p.validate();
  return p;
}

json odi_params_to_json(const OdiParams& p) {
  json j = {{"form", std::string(to_string(p.form))}};
  if (p.form == OdiForm::basic) {
    j["m"] = p.m;
    j["gamma"] = p.gamma;
  } else {
    j["p1"] = p.p1;
    j["q1"] = p.q1;
    j["gamma1"] = p.gamma1;
    j["N"] = p.dimension;
    j["delta1"] = p.delta1();
    j["delta2"] = p.delta2();
    if (p.form == OdiForm::multi_term)
      j["betas"] = p.betas;
    else
      j["beta"] = p.beta;
    j["z_exponents"] = p.z_exponents();
  }
  j["y_exponent"] = p.y_exponent();
  j["rate_mode"] = p.mode == RateMode::analytic ? "analytic" : "fitted";
  if (p.mode == RateMode::analytic) j["rate"] = p.rate;
  return j;
}

json front_report_to_json(const FrontReport& r) {
  json support = json::array();
  for (const auto& per_time : r.support) {
    json rows = json::array();
    for (const auto& runs : per_time) {
      json row = json::array();
      for (const Interval& iv : runs) row.push_back({iv.lo, iv.hi});
      rows.push_back(row);
    }
    support.push_back(rows);
  }
  return {{"verdict", std::string(to_string(r.verdict))},
          {"ball", {r.ball.lo, r.ball.hi}},
          {"epsilon", r.epsilon},
          {"shrunk_ball", {r.shrunk_ball.lo, r.shrunk_ball.hi}},
          {"thresholds", r.thresholds},
          {"t_prime", r.t_prime},
          {"times", r.times},
          {"support", support}};
}

json envelope_report_to_json(const EnvelopeReport& r) {
  json j = {{"dominated", r.dominated},
            {"monotone", r.monotone},
            {"zero_persists", r.zero_persists},
            {"max_ratio", r.max_ratio},
            {"max_increase", r.max_increase},
            {"dominance_witness", witness_or_null(r.dominance_witness)},
            {"monotonicity_witness", witness_or_null(r.monotonicity_witness)},
            {"expected_tail_exponent", r.expected_tail_exponent},
            {"tail_fit", nullptr}};
  if (r.tail_fit)
    j["tail_fit"] = {{"slope", r.tail_fit->slope}, {"intercept", r.tail_fit->intercept},
                     {"r2", r.tail_fit->r2}};
  return j;
}

json odi_report_to_json(const OdiReport& r) {
  return {{"holds", r.holds},
          {"measured_rate", optional_number(r.measured_rate)},
          {"rate_used", r.rate_used},
          {"max_violation", r.max_violation},
          {"tolerance", r.tolerance},
          {"max_abs_derivative", r.max_abs_derivative},
          {"curvature_scale", r.curvature_scale},
          {"witness", witness_or_null(r.witness)}};
}

json residual_report_to_json(const ResidualReport& r) {
  return {{"max_abs", r.max_abs}, {"scale", r.scale}, {"max_relative", r.max_relative},
          {"samples", r.samples}};
}

}  // namespace degdiff
