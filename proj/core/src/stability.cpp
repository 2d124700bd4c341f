#include "degdiff/stability.hpp"

#include "degdiff/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace degdiff {

namespace {

std::string describe_weight(const WeightPair& w) {
  std::ostringstream os;
  if (w.kind() == WeightPair::Kind::power)
    os << "power(gamma=" << w.gamma() << ", scale=" << w.scale() << ")";
  else
    os << "custom(" << w.custom_id() << ")";
  return os.str();
}

FunctionalSeries integrate_series(const Trajectory& traj, const WeightPair& w, double exponent) {
  FunctionalSeries out;
  out.times = traj.times;
  out.exponent = exponent;
  std::ostringstream os;
  os << "integral of [H(u)]^" << exponent << " dx, H = " << describe_weight(w);
  out.descriptor = os.str();
  const std::vector<double> qw = traj.mesh.quadrature_weights();
  for (const auto& state : traj.states) {
    double sum = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
      const double H = eval_H(w, state[i]);
      if (H > 0.0) sum += qw[i] * std::pow(H, exponent);
    }
    out.values.push_back(sum);
  }
  return out;
}

/// Adaptive classical RK4 for a scalar autonomous ODE, error estimated by step
/// doubling, with cubic Hermite dense output.
class DenseRk4 {
public:
  DenseRk4(std::function<double(double)> f, double t0, double y0, double t1, double tol)
      : f_(std::move(f)) {
    t_.push_back(t0);
    y_.push_back(y0);
    dy_.push_back(f_(y0));
    const double span = t1 - t0;
    if (!(span > 0.0)) return;
    double h = span / 100.0;
    if (std::abs(dy_.back()) > 0.0) h = std::min(h, 0.05 * std::abs(y0 / dy_.back()));
    double t = t0, y = y0;
    while (t < t1) {
      h = std::min(h, t1 - t);
      const double big = step(y, h);
      const double mid = step(y, 0.5 * h);
      const double half = step(mid, 0.5 * h);
      const double y_new = half + (half - big) / 15.0;
      const double dy_new = f_(y_new);
      const double hermite_mid = 0.5 * (y + y_new) + 0.125 * h * (dy_.back() - dy_new);
      const double err = std::max(std::abs(half - big) / 15.0, std::abs(hermite_mid - mid));
      const double scale =
          tol * std::max(std::min(std::abs(half), std::abs(mid)), std::numeric_limits<double>::min());
      if (err <= scale || h < 1e-14 * std::max(1.0, std::abs(t))) {
        const bool last = h >= t1 - t;
        y = y_new;
        t = last ? t1 : t + h;
        t_.push_back(t);
        y_.push_back(y);
        dy_.push_back(dy_new);
        ++steps_;
      } else {
        ++rejected_;
      }
      const double factor = err > 0.0 ? 0.9 * std::pow(scale / err, 0.2) : 4.0;
      h *= std::clamp(factor, 0.1, 4.0);
    }
  }

  double operator()(double t) const {
    if (t <= t_.front()) return y_.front();
    if (t >= t_.back()) return y_.back();
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t k = it - t_.begin();
    const double h = t_[k] - t_[k - 1];
    const double th = (t - t_[k - 1]) / h;
    const double h00 = (1 + 2 * th) * (1 - th) * (1 - th), h10 = th * (1 - th) * (1 - th);
    const double h01 = th * th * (3 - 2 * th), h11 = th * th * (th - 1);
    return h00 * y_[k - 1] + h10 * h * dy_[k - 1] + h01 * y_[k] + h11 * h * dy_[k];
  }

  const std::vector<double>& knots() const { return t_; }
  long steps() const { return steps_; }
  long rejected() const { return rejected_; }

private:
  double step(double y, double h) const {
    const double k1 = f_(y);
    const double k2 = f_(y + 0.5 * h * k1);
    const double k3 = f_(y + 0.5 * h * k2);
    const double k4 = f_(y + h * k3);
    return y + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
  }

  std::function<double(double)> f_;
  std::vector<double> t_, y_, dy_;
  long steps_ = 0;
  long rejected_ = 0;
};

}  // namespace

FunctionalSeries compute_Y(const Trajectory& traj, const WeightPair& w, double exponent) {
  if (!(exponent >= 1.0)) throw ParameterError("Y needs exponent >= 1");
  return integrate_series(traj, w, exponent);
}

FunctionalSeries compute_functional(const Trajectory& traj, const WeightPair& w, double exponent) {
  if (!(exponent > 0.0)) throw ParameterError("functional exponent must be positive");
  return integrate_series(traj, w, exponent);
}

void DecayEnvelope::validate() const {
  if (!(k > 0.0)) throw ParameterError("envelope rate k must be positive");
  if (!(beta > 1.0)) throw ParameterError("envelope exponent beta must exceed 1");
  if (!(Y0 >= 0.0)) throw ParameterError("envelope initial value must be nonnegative");
  if (!std::isfinite(t0)) throw ParameterError("envelope t0 must be finite");
}

double envelope_value(const DecayEnvelope& env, double t) {
  env.validate();
  if (t < env.t0) throw DomainError("envelope evaluated before t0");
  if (env.Y0 == 0.0) return 0.0;
  const double b = env.beta - 1.0;
  return std::pow(env.k * b * (t - env.t0) + std::pow(env.Y0, -b), -1.0 / b);
}

OdeComparison ode_comparison(const DecayEnvelope& env, double t_end, double tol) {
  env.validate();
  if (!(t_end > env.t0)) throw ParameterError("ode comparison needs t_end > t0");
  const double k = env.k, beta = env.beta;
  const DenseRk4 sol([k, beta](double y) { return -k * std::pow(std::max(y, 0.0), beta); },
                     env.t0, env.Y0, t_end, tol);
  OdeComparison out;
  out.steps = sol.steps();
  out.rejected = sol.rejected();
  const auto& knots = sol.knots();
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    for (int j = 0; j < 8; ++j) {
      const double t = knots[i] + (knots[i + 1] - knots[i]) * j / 8.0;
      const double e = envelope_value(env, t);
      out.max_gap = std::max(out.max_gap, std::abs(sol(t) - e) / (e > 0.0 ? e : 1.0));
    }
  }
  const double e = envelope_value(env, t_end);
  out.max_gap = std::max(out.max_gap, std::abs(sol(t_end) - e) / (e > 0.0 ? e : 1.0));
  return out;
}

BasicRate analytic_rate_basic(double K, double gamma, double m, double c0) {
  if (!(K > 0.0)) throw ParameterError("K must be positive");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw ParameterError("gamma must lie in (0,1); gamma = 0 is the heat equation");
  if (!(m >= 2.0 - gamma)) throw ParameterError("m must satisfy m >= 2 - gamma");
  if (!(c0 > 0.0)) throw ParameterError("c0 must be positive");
  BasicRate r;
  r.k1 = 4.0 * K * m * (m + gamma - 1.0) / (c0 * c0 * (1.0 - gamma) * (m + gamma) * (m + gamma));
  r.beta = (m + gamma) / m;
  return r;
}

Coefficient basic_model_coefficient(double K, double gamma) {
  if (!(K > 0.0)) throw ParameterError("K must be positive");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in [0,1)");
  if (gamma == 0.0) return Coefficient::constant(K);
  return Coefficient::power_law(K / (1.0 - gamma), gamma);
}

EnvelopeReport verify_envelope(const FunctionalSeries& series, const DecayEnvelope& env,
                               double slack, std::optional<double> monotone_tol) {
  env.validate();
  if (!(slack >= 0.0)) throw ParameterError("slack must be nonnegative");
  if (series.times.size() != series.values.size())
    throw ParameterError("series times and values differ in length");
  EnvelopeReport r;
  r.expected_tail_exponent = -1.0 / (env.beta - 1.0);
  if (series.values.empty()) return r;
  const double mtol = monotone_tol.value_or(1e-10 * series.values.front());
  bool seen_zero = false;
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    const double t = series.times[i];
    const double y = series.values[i];
    const double e = envelope_value(env, t);
    if (e > 0.0) r.max_ratio = std::max(r.max_ratio, y / e);
    const double bound = (1.0 + slack) * e;
    if (y > bound && r.dominated) {
      r.dominated = false;
      r.dominance_witness = Witness{t, std::nullopt, y, bound, true};
    }
    if (i > 0) {
      const double inc = y - series.values[i - 1];
      r.max_increase = std::max(r.max_increase, inc);
      if (inc > mtol && r.monotone) {
        r.monotone = false;
        r.monotonicity_witness = Witness{t, std::nullopt, y, series.values[i - 1] + mtol, true};
      }
    }
    if (seen_zero && y != 0.0) r.zero_persists = false;
    if (y == 0.0) seen_zero = true;
  }
  const double last = series.times.back() - env.t0;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    const double dt = series.times[i] - env.t0;
    if (dt > 0.0 && dt >= last / 10.0 && series.values[i] > 0.0) {
      lx.push_back(std::log(dt));
      ly.push_back(std::log(series.values[i]));
    }
  }
  if (lx.size() >= 3) r.tail_fit = fit_line(lx, ly);
  return r;
}

std::string_view to_string(OdiForm f) {
  switch (f) {
    case OdiForm::basic: return "basic";
    case OdiForm::critical: return "critical";
    case OdiForm::supercritical: return "supercritical";
    case OdiForm::multi_term: return "multi-term";
  }
  return "basic";
}

OdiForm odi_form_from_string(std::string_view s) {
  for (OdiForm f : {OdiForm::basic, OdiForm::critical, OdiForm::supercritical, OdiForm::multi_term})
    if (to_string(f) == s) return f;
  throw ParameterError("unknown ODI form '" + std::string(s) + "'");
}

double OdiParams::delta1() const { return (p1 + 1.0) / (gamma1 + 1.0); }

double OdiParams::delta2() const {
  const double d1 = delta1();
  if (dimension <= 1) return 1.0;
  const double N = dimension;
  if (d1 <= N / (N - 1.0)) return 1.0;
  return d1 * N / (N + d1);
}

double OdiParams::y_exponent() const {
  if (form == OdiForm::basic) return (m + gamma) / m;
  return 2.0 / delta1();
}

std::vector<double> OdiParams::z_exponents() const {
  const double d2 = delta2();
  const auto p_of = [&](double b) { return (b - q1 / 2.0) * 2.0 * d2 / (2.0 - d2); };
  switch (form) {
    case OdiForm::supercritical: return {p_of(beta)};
    case OdiForm::multi_term: {
      std::vector<double> out;
      for (double b : betas) out.push_back(p_of(b));
      return out;
    }
    default: return {};
  }
}

void OdiParams::validate() const {
  if (mode == RateMode::analytic && !(rate > 0.0))
    throw ParameterError("analytic ODI mode needs a positive rate");
  if (form == OdiForm::basic) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in (0,1)");
    if (!(m >= 2.0 - gamma)) throw ParameterError("m must satisfy m >= 2 - gamma");
    return;
  }
  if (!(p1 > 0.0 && q1 > 0.0 && gamma1 > 0.0))
    throw ParameterError("p1, q1 and gamma1 must be positive");
  if (dimension < 1) throw ParameterError("dimension must be >= 1");
  const double d1 = delta1();
  if (!(d1 >= 1.0 && d1 < 2.0)) throw ParameterError("delta1 = (p1+1)/(gamma1+1) must lie in [1,2)");
  const double half = q1 / 2.0;
  switch (form) {
    case OdiForm::critical:
      if (std::abs(beta - half) > 1e-12 * std::max(1.0, half))
        throw ParameterError("critical form needs beta = q1/2");
      break;
    case OdiForm::supercritical:
      if (!(beta > half)) throw ParameterError("supercritical form needs beta > q1/2");
      break;
    case OdiForm::multi_term:
      if (betas.size() < 2) throw ParameterError("multi-term form needs at least two betas");
      for (std::size_t i = 0; i < betas.size(); ++i) {
        if (!(betas[i] > half)) throw ParameterError("every beta_i must exceed q1/2");
        if (i > 0 && !(betas[i - 1] > betas[i]))
          throw ParameterError("betas must be strictly decreasing");
      }
      break;
    default: break;
  }
}

double analytic_rate_critical(double p1, double c3, double c4, double c_p) {
  if (!(p1 > 0.0 && c3 > 0.0 && c4 > 0.0 && c_p > 0.0))
    throw ParameterError("critical rate needs positive p1, c3, c4, c_p");
  return (p1 + 1.0) * c3 / (c4 * c4 * c_p * c_p);
}

OdiReport verify_odi(const FunctionalSeries& y, std::span<const FunctionalSeries> z,
                     const OdiParams& params, double slack) {
  params.validate();
  if (!(slack >= 0.0)) throw ParameterError("slack must be nonnegative");
  const std::size_t n = y.values.size();
  if (n < 3 || y.times.size() != n) throw DomainError("verify_odi needs at least 3 samples");
  const std::size_t nz = params.z_exponents().size();
  if (z.size() != nz)
    throw ParameterError("expected " + std::to_string(nz) + " auxiliary series, got " +
                         std::to_string(z.size()));
  for (const auto& s : z)
    if (s.times != y.times || s.values.size() != n)
      throw ParameterError("auxiliary series must share the sample times of Y");
  for (std::size_t i = 1; i < n; ++i)
    if (!(y.times[i] > y.times[i - 1])) throw ParameterError("sample times must increase");

  const double y_exp = params.y_exponent();
  const double z_power = nz ? (2.0 - params.delta2()) / params.delta2() : 0.0;
  std::vector<double> dY(n, 0.0), G(n, 0.0);
  OdiReport r;
  double dt_out = 0.0, max_d2 = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = y.times[i] - y.times[i - 1];
    const double hp = y.times[i + 1] - y.times[i];
    dt_out = std::max({dt_out, hm, hp});
    const double ym = y.values[i - 1], y0 = y.values[i], yp = y.values[i + 1];
    dY[i] = -hp / (hm * (hm + hp)) * ym + (hp - hm) / (hm * hp) * y0 + hm / (hp * (hm + hp)) * yp;
    max_d2 = std::max(max_d2, std::abs(2.0 * ((yp - y0) / hp - (y0 - ym) / hm) / (hm + hp)));
    double zsum = 0.0;
    for (const auto& s : z) zsum += s.values[i];
    G[i] = y0 > 0.0 ? std::pow(y0, y_exp) / std::pow(zsum + 1.0, z_power) : 0.0;
    r.max_abs_derivative = std::max(r.max_abs_derivative, std::abs(dY[i]));
    if (G[i] > 0.0) {
      const double c = -dY[i] / G[i];
      r.measured_rate = r.measured_rate ? std::min(*r.measured_rate, c) : c;
    }
  }
  r.curvature_scale = dt_out * max_d2;
  r.tolerance = slack * r.max_abs_derivative;
  r.rate_used = params.mode == RateMode::analytic ? params.rate : r.measured_rate.value_or(0.0);
  r.max_violation = -std::numeric_limits<double>::infinity();
  std::size_t worst = 1;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double v = dY[i] + r.rate_used * G[i];
    if (v > r.max_violation) {
      r.max_violation = v;
      worst = i;
    }
  }
  const bool all_zero = !r.measured_rate;
  r.holds = r.max_violation <= r.tolerance && (all_zero || r.rate_used > 0.0);
  if (!r.holds) r.witness = Witness{y.times[worst], std::nullopt, r.max_violation, r.tolerance, true};
  return r;
}

FunctionalSeries generalized_odi_envelope(const std::function<double(double)>& rate_fn,
                                          double Y0, double t0, std::span<const double> times,
                                          double tol) {
  if (!(Y0 >= 0.0)) throw ParameterError("Y0 must be nonnegative");
  FunctionalSeries out;
  out.descriptor = "solution of Y' = -R(Y)";
  double t_end = t0;
  for (double t : times) {
    if (t < t0) throw DomainError("sample times must not precede t0");
    t_end = std::max(t_end, t);
  }
  const auto rhs = [&rate_fn](double y) {
    const double v = y > 0.0 ? rate_fn(y) : 0.0;
    if (v < 0.0 || std::isnan(v))
      throw DomainError("rate function is negative at Y = " + std::to_string(y));
    return -v;
  };
  if (Y0 > 0.0) rhs(Y0);
  const DenseRk4 sol(rhs, t0, Y0, t_end, tol);
  for (double t : times) {
    out.times.push_back(t);
    out.values.push_back(std::max(sol(t), 0.0));
  }
  return out;
}

PoincareCheck validate_poincare_1d(double c0, double q, int samples, std::uint64_t seed) {
  if (!(c0 > 0.0)) throw ParameterError("c0 must be positive");
  if (!(q >= 1.0)) throw ParameterError("q must be >= 1");
  if (samples < 1) throw ParameterError("need at least one sample");
  constexpr int n = 4001;
  const double dx = 1.0 / (n - 1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  PoincareCheck r;
  r.c0 = c0;
  r.q = q;
  r.samples = samples;
  std::vector<double> w(n);
  for (int s = 0; s < samples; ++s) {
    std::fill(w.begin(), w.end(), 0.0);
    if (s % 2 == 0) {
      const int modes = 1 + static_cast<int>(uniform(rng) * 8);
      for (int k = 1; k <= modes; ++k) {
        const double c = normal(rng) / k;
        for (int i = 0; i < n; ++i) w[i] += c * std::sin(k * M_PI * i * dx);
      }
    } else {
      const int tents = 1 + static_cast<int>(uniform(rng) * 3);
      for (int j = 0; j < tents; ++j) {
        const double lo = 0.9 * uniform(rng);
        const double hi = lo + (1.0 - lo) * (0.05 + 0.95 * uniform(rng));
        const double peak = lo + (hi - lo) * uniform(rng);
        const double height = normal(rng);
        for (int i = 0; i < n; ++i) {
          const double x = i * dx;
          if (x > lo && x < hi)
            w[i] += height * (x <= peak ? (x - lo) / (peak - lo) : (hi - x) / (hi - peak));
        }
      }
    }
    w.front() = w.back() = 0.0;
    double grad = 0.0;
    for (int i = 0; i + 1 < n; ++i) grad += (w[i + 1] - w[i]) * (w[i + 1] - w[i]) / dx;
    grad = std::sqrt(grad);
    if (grad == 0.0) continue;
    double norm = 0.0;
    if (std::isinf(q)) {
      for (double v : w) norm = std::max(norm, std::abs(v));
    } else {
      for (int i = 0; i < n; ++i)
        norm += (i == 0 || i == n - 1 ? 0.5 : 1.0) * dx * std::pow(std::abs(w[i]), q);
      norm = std::pow(norm, 1.0 / q);
    }
    r.max_ratio = std::max(r.max_ratio, norm / grad);
  }
  r.holds = r.max_ratio <= c0 * (1.0 + 1e-9);
  return r;
}

}  // namespace degdiff
