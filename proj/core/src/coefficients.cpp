#include "degdiff/coefficients.hpp"

#include "degdiff/errors.hpp"
#include "degdiff/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace degdiff {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double a_times_I(const Coefficient& coeff, double s, double tol) {
  return eval_a(coeff, s) * eval_I(coeff, s, tol).value;
}

// Shared verdict logic for the two ends of a(s)I(s). `toward` lists the samples
// ordered from the inner region toward the limit point; `decade_of(i)` is
// the number of decades between sample i and the extreme sample.
ConditionReport bounded_tail_verdict(std::string condition, const Coefficient& coeff,
                                     const std::vector<double>& s, const std::vector<double>& g,
                                     bool toward_zero, double tol) {
  ConditionReport r;
  r.condition = std::move(condition);
  const double extreme = toward_zero ? s.front() : s.back();
  auto decades = [&](double x) { return std::abs(std::log10(x / extreme)); };

  const double eps = 1e-9;
  double sup_last = -std::numeric_limits<double>::infinity();
  double sup_prev = sup_last;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = decades(s[i]);
    if (d <= 1.0 + eps) sup_last = std::max(sup_last, g[i]);
    else if (d <= 2.0 + eps) sup_prev = std::max(sup_prev, g[i]);
  }
  r.constants["limsup_estimate"] = sup_last;
  r.constants["sup_previous_decade"] = sup_prev;

  const double change = std::abs(sup_last - sup_prev) / std::max(std::abs(sup_last), 1e-300);
  r.constants["relative_change"] = change;
  if (change < 1e-3) {
    r.verdict = Verdict::satisfied;
    return r;
  }

  // Monotone growth toward the limit point over the last three decades.
  std::vector<double> xs, ys;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (decades(s[i]) <= 3.0 + eps) idx.push_back(i);
  if (toward_zero) std::reverse(idx.begin(), idx.end());  // inner → limit
  bool monotone = idx.size() >= 4;
  for (std::size_t k = 1; monotone && k < idx.size(); ++k)
    monotone = g[idx[k]] > g[idx[k - 1]];
  if (!monotone) {
    r.verdict = Verdict::inconclusive;
    r.note = "neither stabilized over the last decade nor monotone over three decades";
    return r;
  }
  for (std::size_t i : idx) {
    xs.push_back(std::abs(std::log(s[i])));
    ys.push_back(g[i]);
  }
  const LinearFit fit = fit_line(xs, ys);
  r.verdict = Verdict::violated;
  r.constants["growth_slope"] = fit.slope;
  r.constants["growth_intercept"] = fit.intercept;
  r.constants["growth_r2"] = fit.r2;
  Witness w;
  w.s = extreme;
  w.value = a_times_I(coeff, extreme, tol);
  w.bound = sup_prev * (1.0 + 1e-3);
  w.exceeds = true;
  r.witness = w;
  r.note = "a(s)I(s) keeps growing toward the limit point: sup over the last decade exceeds "
           "the previous decade's sup";
  return r;
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::power_law: return "power-law";
    case Family::counterexample: return "counterexample";
    case Family::tabulated: return "tabulated";
  }
  return "power-law";
}

double Counterexample::log_branch(double s) const {
  const double L = std::abs(std::log(s));
  return std::pow(L, 2.0 / lambda) / (lambda * L - (lambda + dimension - 2.0));
}

Coefficient Coefficient::power_law(double k, double rho) {
  if (!(k > 0.0) || !(rho > 0.0))
    throw ParameterError("power-law coefficient needs k > 0 and rho > 0");
  return Coefficient(PowerLaw{k, rho});
}

Coefficient Coefficient::constant(double k) {
  if (!(k > 0.0)) throw ParameterError("constant coefficient needs k > 0");
  return Coefficient(PowerLaw{k, 0.0});
}

Coefficient Coefficient::counterexample(double lambda, int dimension, double u_star,
                                        double a_star) {
  if (!(lambda > 2.0)) throw ParameterError("counterexample needs lambda > 2, got " + num(lambda));
  if (dimension < 1) throw ParameterError("counterexample needs dimension N >= 1");
  if (!(u_star > 0.0 && u_star < 1.0)) throw ParameterError("counterexample needs u* in (0,1)");
  if (!(a_star > 0.0)) throw ParameterError("counterexample needs a* > 0");
  Counterexample c{lambda, dimension, u_star, a_star};
  const double denom = lambda * std::abs(std::log(u_star)) - (lambda + dimension - 2.0);
  if (!(denom > 0.0))
    throw ParameterError("counterexample denominator lambda|ln u*| - (lambda+N-2) must be > 0");
  const double left = c.log_branch(u_star);
  const double right = a_star * (u_star + 1.0);
  if (std::abs(left - right) > 1e-12 * left)
    throw ParameterError("counterexample branches disagree at u*: " + num(left) + " vs " +
                         num(right));
  return Coefficient(c);
}

Coefficient Coefficient::tabulated(std::vector<double> s, std::vector<double> a,
                                   double tail_exponent) {
  if (s.size() != a.size() || s.size() < 2)
    throw ParameterError("tabulated coefficient needs parallel arrays of length >= 2");
  if (s.front() != 0.0 || a.front() != 0.0)
    throw DomainError("tabulated coefficient must start at (0, 0): a(0) = 0 is required");
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) throw ParameterError("tabulated abscissae must be strictly increasing");
    if (!(a[i] > 0.0)) throw DomainError("tabulated coefficient must be positive for s > 0");
  }
  if (!std::isfinite(tail_exponent)) throw ParameterError("tail exponent must be finite");
  return Coefficient(Tabulated{std::move(s), std::move(a), tail_exponent});
}

Family Coefficient::family() const { return static_cast<Family>(params_.index()); }

double Coefficient::operator()(double s) const {
  if (s == 0.0) {
    const auto* p = std::get_if<PowerLaw>(&params_);
    return p && p->rho == 0.0 ? p->k : 0.0;
  }
  return std::visit(
      overloaded{
          [s](const PowerLaw& p) { return p.k * std::pow(s, p.rho); },
          [s](const Counterexample& c) {
            return s < c.u_star ? c.log_branch(s) : c.a_star * (s + 1.0);
          },
          [s](const Tabulated& t) {
            if (s >= t.s.back()) return t.a.back() * std::pow(s / t.s.back(), t.tail_exponent);
            const auto it = std::upper_bound(t.s.begin(), t.s.end(), s);
            const std::size_t i = static_cast<std::size_t>(it - t.s.begin());
            const double w = (s - t.s[i - 1]) / (t.s[i] - t.s[i - 1]);
            return (1.0 - w) * t.a[i - 1] + w * t.a[i];
          },
      },
      params_);
}

std::optional<double> Coefficient::derivative(double s) const {
  return std::visit(
      overloaded{
          [s](const PowerLaw& p) -> std::optional<double> {
            if (p.rho == 0.0) return 0.0;
            return p.k * p.rho * std::pow(s, p.rho - 1.0);
          },
          [s](const Counterexample& c) -> std::optional<double> {
            if (s >= c.u_star) return c.a_star;
            if (s == 0.0) return std::nullopt;
            const double L = -std::log(s);
            const double d = c.lambda * L - (c.lambda + c.dimension - 2.0);
            const double dL = (2.0 / c.lambda) * std::pow(L, 2.0 / c.lambda - 1.0) / d -
                              c.lambda * std::pow(L, 2.0 / c.lambda) / (d * d);
            return -dL / s;
          },
          [](const Tabulated&) -> std::optional<double> { return std::nullopt; },
      },
      params_);
}

std::vector<double> Coefficient::breakpoints() const {
  return std::visit(overloaded{
                        [](const PowerLaw&) { return std::vector<double>{}; },
                        [](const Counterexample& c) { return std::vector<double>{c.u_star}; },
                        [](const Tabulated& t) {
                          return std::vector<double>(t.s.begin() + 1, t.s.end());
                        },
                    },
                    params_);
}

double eval_a(const Coefficient& coeff, double s) {
  if (!(s >= 0.0)) throw DomainError("a(s) needs s >= 0, got " + num(s));
  return coeff(s);
}

quad::Result eval_I(const Coefficient& coeff, double s, double tol) {
  if (!(s > 0.0)) throw DomainError("I(s) needs s > 0, got " + num(s));
  if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  const auto integrand = [&coeff](double x) { return 1.0 / coeff(std::exp(x)); };

  std::vector<double> cuts;
  for (double b : coeff.breakpoints()) cuts.push_back(std::log(b));

  const double x0 = std::log(s);
  quad::Result total;
  double tail_start = x0;
  if (x0 < 0.0) {
    total = quad::adaptive_simpson_split(integrand, x0, 0.0, cuts, tol);
    tail_start = 0.0;
  }
  try {
    const quad::Result tail = quad::semi_infinite(integrand, tail_start, tol, cuts);
    total.value += tail.value;
    total.abs_error += tail.abs_error;
    total.evaluations += tail.evaluations;
  } catch (const DivergenceError& e) {
    throw DivergenceError(std::string("I(") + num(s) + ") diverges: " + e.what(),
                          total.value + e.partial_sum());
  }
  return total;
}

ConditionReport check_test1(const Coefficient& coeff, const LogGrid& grid, double tol) {
  if (grid.s_min > 1e-8 * (1.0 + 1e-12))
    throw DomainError("test1 grid must extend down to s = 1e-8");
  if (std::log10(grid.s_max / grid.s_min) < 3.0)
    throw DomainError("test1 grid must span at least three decades");
  const std::vector<double> s = grid.points();
  std::vector<double> g(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) g[i] = a_times_I(coeff, s[i], tol);
  ConditionReport r = bounded_tail_verdict("test1", coeff, s, g, true, tol);
  r.grid = grid;
  r.grid["tol"] = tol;
  return r;
}

ConditionReport check_at_infinity(const Coefficient& coeff, double tol) {
  const LogGrid grid{1.0, 1e6, 10};
  const std::vector<double> s = grid.points();
  std::vector<double> g(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) g[i] = a_times_I(coeff, s[i], tol);
  ConditionReport r = bounded_tail_verdict("at-infinity", coeff, s, g, false, tol);
  r.grid = grid;
  r.grid["tol"] = tol;
  return r;
}

namespace {

struct Test2Sample {
  std::vector<double> s;
  std::vector<double> log_a;
  std::vector<double> log_I;

  // min over i < j of [lg_i − lg_j] with lg = log a + μ log I, and its argmin,
  // capped at 0, the v → s limit of the ratio.
  std::pair<double, std::pair<std::size_t, std::size_t>> log_c_hat(double mu) const {
    double best = 0.0;
    std::pair<std::size_t, std::size_t> arg{0, 1};
    double run_min = log_a[0] + mu * log_I[0];
    std::size_t run_arg = 0;
    for (std::size_t j = 1; j < s.size(); ++j) {
      const double lg = log_a[j] + mu * log_I[j];
      if (run_min - lg < best) {
        best = run_min - lg;
        arg = {run_arg, j};
      }
      if (lg < run_min) {
        run_min = lg;
        run_arg = j;
      }
    }
    return {best, arg};
  }
};

Test2Sample sample_test2(const Coefficient& coeff, const LogGrid& grid, double tol) {
  Test2Sample out;
  out.s = grid.points();
  for (double s : out.s) {
    out.log_a.push_back(std::log(eval_a(coeff, s)));
    out.log_I.push_back(std::log(eval_I(coeff, s, tol).value));
  }
  return out;
}

double test2_ratio(const Coefficient& coeff, double s, double v, double mu, double tol) {
  const double ls = std::log(eval_a(coeff, s)) + mu * std::log(eval_I(coeff, s, tol).value);
  const double lv = std::log(eval_a(coeff, v)) + mu * std::log(eval_I(coeff, v, tol).value);
  return std::exp(ls - lv);
}

}  // namespace

ConditionReport check_test2(const Coefficient& coeff, std::span<const double> mu_grid,
                            const Test2Options& opt) {
  if (!(opt.s_min > 0.0) || !(opt.s_max < 1.0) || !(opt.s_min < opt.s_max))
    throw DomainError("test2 sampling region must satisfy 0 < s_min < s_max < 1");
  if (mu_grid.empty()) throw DomainError("test2 needs at least one candidate exponent");
  for (double mu : mu_grid)
    if (!(mu > 0.0)) throw DomainError("test2 exponents must be positive");

  const LogGrid coarse{opt.s_min, opt.s_max, opt.points_per_decade};
  const LogGrid fine{opt.s_min / 100.0, opt.s_max, 2 * opt.points_per_decade};
  const Test2Sample cs = sample_test2(coeff, coarse, opt.tol);
  const Test2Sample fs = sample_test2(coeff, fine, opt.tol);

  std::vector<double> mus(mu_grid.begin(), mu_grid.end());
  std::sort(mus.begin(), mus.end());

  ConditionReport r;
  r.condition = "test2";
  r.grid = {{"coarse", coarse}, {"fine", fine}, {"mu_grid", mus}, {"tol", opt.tol}};

  double best_c = -1.0;
  double best_mu = mus.front();
  std::pair<std::size_t, std::size_t> best_arg{0, 1};
  double best_coarse = 0.0;
  for (double mu : mus) {
    const double lc_coarse = cs.log_c_hat(mu).first;
    const auto [lc_fine, arg] = fs.log_c_hat(mu);
    const double c_coarse = std::exp(lc_coarse);
    const double c_fine = std::exp(lc_fine);
    if (c_fine > opt.c_floor && c_fine >= opt.refinement_ratio * c_coarse) {
      r.verdict = Verdict::satisfied;
      r.constants = {{"mu", mu}, {"c", c_fine}, {"c_coarse", c_coarse}};
      return r;
    }
    if (c_fine > best_c) {
      best_c = c_fine;
      best_mu = mu;
      best_arg = arg;
      best_coarse = c_coarse;
    }
  }
  r.verdict = Verdict::violated;
  r.constants = {{"mu", best_mu}, {"c", best_c}, {"c_coarse", best_coarse}};
  Witness w;
  w.s = fs.s[best_arg.first];
  w.v = fs.s[best_arg.second];
  w.value = test2_ratio(coeff, w.s, *w.v, best_mu, opt.tol);
  w.bound = std::max(opt.c_floor, opt.refinement_ratio * best_coarse);
  w.exceeds = false;
  r.witness = w;
  r.note = "no candidate exponent keeps inf a(s)I^mu(s)/(a(v)I^mu(v)) away from 0 under refinement";
  return r;
}

double default_log_splice(double lambda, int dimension) {
  return 2.0 * (lambda + dimension - 2.0) / lambda;
}

Coefficient make_counterexample(double lambda, int dimension) {
  if (!(lambda > 2.0)) throw ParameterError("counterexample needs lambda > 2, got " + num(lambda));
  return make_counterexample(lambda, dimension, default_log_splice(lambda, dimension));
}

Coefficient make_counterexample(double lambda, int dimension, double log_splice) {
  if (!(lambda > 2.0)) throw ParameterError("counterexample needs lambda > 2, got " + num(lambda));
  if (dimension < 1) throw ParameterError("counterexample needs dimension N >= 1");
  if (!(log_splice > (lambda + dimension - 2.0) / lambda))
    throw ParameterError("splice needs |ln u*| > (lambda+N-2)/lambda");
  const double u_star = std::exp(-log_splice);
  const Counterexample probe{lambda, dimension, u_star, 0.0};
  const double a_star = probe.log_branch(u_star) / (1.0 + u_star);
  return Coefficient::counterexample(lambda, dimension, u_star, a_star);
}

double recheck_witness(const Coefficient& coeff, const ConditionReport& report, double tol) {
  if (!report.witness) throw DomainError("report carries no witness");
  const Witness& w = *report.witness;
  if (report.condition == "test1" || report.condition == "at-infinity")
    return a_times_I(coeff, w.s, tol);
  if (report.condition == "test2") {
    if (!w.v) throw DomainError("test2 witness needs a second point");
    return test2_ratio(coeff, w.s, *w.v, report.constants.at("mu"), tol);
  }
  throw DomainError("no coefficient witness for condition '" + report.condition + "'");
}

}  // namespace degdiff
