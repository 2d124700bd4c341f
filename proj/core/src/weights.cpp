#include "degdiff/weights.hpp"

#include "degdiff/errors.hpp"
#include "degdiff/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace degdiff {

const std::vector<CustomWeight>& custom_weights() {
  static const std::vector<CustomWeight> registry = {
      {"log1p", "h(s) = 1/(1+s), H(s) = ln(1+s)", [](double s) { return 1.0 / (1.0 + s); }, {}},
      {"exp-decay", "h(s) = exp(-s), H(s) = 1 - exp(-s)", [](double s) { return std::exp(-s); },
       {}},
      {"inv-sqrt", "h(s) = 1/(2 sqrt(s)), H(s) = sqrt(s)",
       [](double s) { return 0.5 / std::sqrt(s); }, {}},
      {"step", "h(s) = 1 for s < 1, 2 for s >= 1 (H has a kink at 1)",
       [](double s) { return s < 1.0 ? 1.0 : 2.0; }, {1.0}},
      {"reciprocal", "h(s) = 1/s, not integrable at 0", [](double s) { return 1.0 / s; }, {}},
  };
  return registry;
}

WeightPair WeightPair::power(double gamma, double scale) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ParameterError("power weight needs gamma in [0,1)");
  if (!(scale > 0.0)) throw ParameterError("power weight needs scale > 0");
  WeightPair w;
  w.kind_ = Kind::power;
  w.gamma_ = gamma;
  w.scale_ = scale;
  return w;
}

WeightPair WeightPair::custom(std::string_view id) {
  for (const CustomWeight& c : custom_weights()) {
    if (c.id == id) {
      WeightPair w;
      w.kind_ = Kind::custom;
      w.custom_id_ = c.id;
      w.custom_ = &c;
      return w;
    }
  }
  throw ParameterError("unknown custom weight '" + std::string(id) + "'");
}

double WeightPair::h(double s) const {
  if (kind_ == Kind::power) return scale_ * (1.0 - gamma_) * std::pow(s, -gamma_);
  return custom_->h(s);
}

std::optional<double> WeightPair::dh(double s) const {
  if (kind_ != Kind::power) return std::nullopt;
  return -gamma_ * scale_ * (1.0 - gamma_) * std::pow(s, -gamma_ - 1.0);
}

double WeightPair::H(double s) const {
  if (s == 0.0) return 0.0;
  if (kind_ == Kind::power) return scale_ * std::pow(s, 1.0 - gamma_);
  // r = s e^{-y} maps (0, s] onto [0, ∞) and tames integrable singularities at 0.
  const auto integrand = [this, s](double y) {
    const double r = s * std::exp(-y);
    return r == 0.0 ? 0.0 : custom_->h(r) * r;
  };
  std::vector<double> cuts;
  for (double b : custom_->breakpoints)
    if (b < s) cuts.push_back(std::log(s / b));
  try {
    return quad::semi_infinite(integrand, 0.0, 1e-11, cuts).value;
  } catch (const DivergenceError&) {
    throw DomainError("weight '" + custom_id_ + "' is not integrable near 0");
  }
}

std::vector<double> WeightPair::breakpoints() const {
  if (kind_ == Kind::power) return {};
  return custom_->breakpoints;
}

double eval_H(const WeightPair& w, double s) {
  if (!(s >= 0.0)) throw DomainError("H(s) needs s >= 0");
  return w.H(s);
}

double eval_F(const WeightPair& w, const Coefficient& coeff, double s) {
  if (!(s >= 0.0)) throw DomainError("F(s) needs s >= 0");
  if (s == 0.0) return 0.0;
  return w.h(s) * coeff(s);
}

std::string_view to_string(AssumptionId id) {
  switch (id) {
    case AssumptionId::hh_product: return "hh-product";
    case AssumptionId::fh_product: return "fh-product-1";
    case AssumptionId::unbounded_monotone: return "unbb";
    case AssumptionId::no_h_prime_1: return "no-h-prime-1";
    case AssumptionId::no_h_prime_2: return "no-h-prime-2";
    case AssumptionId::extended_no_h_prime_2: return "ext-no-h-prime-2";
  }
  return "hh-product";
}

AssumptionId assumption_from_string(std::string_view s) {
  for (AssumptionId id : {AssumptionId::hh_product, AssumptionId::fh_product,
                          AssumptionId::unbounded_monotone, AssumptionId::no_h_prime_1,
                          AssumptionId::no_h_prime_2, AssumptionId::extended_no_h_prime_2})
    if (to_string(id) == s) return id;
  throw ParameterError("unknown assumption id '" + std::string(s) + "'");
}

void AssumptionParams::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0)) throw ParameterError(std::string(name) + " must be positive");
  };
  switch (id) {
    case AssumptionId::hh_product:
    case AssumptionId::fh_product:
      positive(gamma1, "gamma1");
      positive(bound, "bound M");
      break;
    case AssumptionId::unbounded_monotone:
      if (!(p >= 0.0)) throw ParameterError("p must be >= 0");
      break;
    case AssumptionId::no_h_prime_1:
      positive(p1, "p1");
      positive(q1, "q1");
      break;
    case AssumptionId::no_h_prime_2:
      positive(gamma1, "gamma1");
      positive(beta, "beta");
      break;
    case AssumptionId::extended_no_h_prime_2:
      positive(gamma1, "gamma1");
      positive(q1, "q1");
      if (betas.size() < 2) throw ParameterError("extended assumption needs at least two betas");
      for (std::size_t i = 0; i < betas.size(); ++i) {
        if (!(betas[i] > q1 / 2.0)) throw ParameterError("every beta_i must exceed q1/2");
        if (i > 0 && !(betas[i - 1] > betas[i]))
          throw ParameterError("betas must be strictly decreasing (beta1 > beta2 > ...)");
      }
      break;
  }
}

bool AssumptionParams::bounded() const {
  return id == AssumptionId::hh_product || id == AssumptionId::fh_product;
}

namespace {

enum class BoundKind { upper, lower_positive, lower_nonnegative };

BoundKind bound_kind(AssumptionId id) {
  switch (id) {
    case AssumptionId::hh_product:
    case AssumptionId::no_h_prime_2:
    case AssumptionId::extended_no_h_prime_2: return BoundKind::upper;
    case AssumptionId::fh_product:
    case AssumptionId::no_h_prime_1: return BoundKind::lower_positive;
    case AssumptionId::unbounded_monotone: return BoundKind::lower_nonnegative;
  }
  return BoundKind::upper;
}

const char* constant_name(AssumptionId id) {
  switch (id) {
    case AssumptionId::hh_product: return "c1";
    case AssumptionId::fh_product: return "c2";
    case AssumptionId::unbounded_monotone: return "inf_derivative";
    case AssumptionId::no_h_prime_1: return "c3";
    case AssumptionId::no_h_prime_2: return "c4";
    case AssumptionId::extended_no_h_prime_2: return "c5";
  }
  return "c";
}

// Right-hand side power H^{q₁}, H^β or Σ H^{βᵢ} dividing the derivative.
double denominator(const AssumptionParams& p, double H) {
  switch (p.id) {
    case AssumptionId::no_h_prime_1: return std::pow(H, p.q1);
    case AssumptionId::no_h_prime_2: return std::pow(H, p.beta);
    case AssumptionId::extended_no_h_prime_2: {
      double sum = 0.0;
      for (double b : p.betas) sum += std::pow(H, b);
      return sum;
    }
    default: return 1.0;
  }
}

// The function whose derivative the assumption constrains.
double inner(const WeightPair& w, const Coefficient& coeff, const AssumptionParams& p, double s) {
  const double H = w.H(s);
  switch (p.id) {
    case AssumptionId::hh_product:
    case AssumptionId::no_h_prime_2:
    case AssumptionId::extended_no_h_prime_2: return std::pow(H, p.gamma1 + 1.0);
    case AssumptionId::fh_product: return w.h(s) * coeff(s) * std::pow(H, p.gamma1 + 1.0);
    case AssumptionId::unbounded_monotone: return w.h(s) * coeff(s) * std::pow(H, p.p);
    case AssumptionId::no_h_prime_1: return std::pow(H, p.p1) * w.h(s) * coeff(s);
  }
  return 0.0;
}

std::optional<double> closed_derivative(const WeightPair& w, const Coefficient& coeff,
                                        const AssumptionParams& p, double s) {
  const auto dh = w.dh(s);
  const auto da = coeff.derivative(s);
  const double H = w.H(s);
  const double h = w.h(s);
  const double a = coeff(s);
  const double g1 = p.gamma1;
  const auto need_F = [&]() -> std::optional<double> {
    if (!dh || !da) return std::nullopt;
    return *dh * a + h * *da;
  };
  switch (p.id) {
    case AssumptionId::hh_product:
    case AssumptionId::no_h_prime_2:
    case AssumptionId::extended_no_h_prime_2:
      if (!dh) return std::nullopt;
      return (g1 + 1.0) * std::pow(H, g1) * h;
    case AssumptionId::fh_product: {
      const auto dF = need_F();
      if (!dF) return std::nullopt;
      return *dF * std::pow(H, g1 + 1.0) + h * a * (g1 + 1.0) * std::pow(H, g1) * h;
    }
    case AssumptionId::unbounded_monotone: {
      const auto dF = need_F();
      if (!dF) return std::nullopt;
      if (p.p == 0.0) return *dF;
      return *dF * std::pow(H, p.p) + h * a * p.p * std::pow(H, p.p - 1.0) * h;
    }
    case AssumptionId::no_h_prime_1: {
      const auto dF = need_F();
      if (!dF) return std::nullopt;
      return p.p1 * std::pow(H, p.p1 - 1.0) * h * h * a + std::pow(H, p.p1) * *dF;
    }
  }
  return std::nullopt;
}

struct Sample {
  double value = 0.0;
  bool nonsmooth = false;
};

Sample sample_quantity(const WeightPair& w, const Coefficient& coeff, const AssumptionParams& p,
                       double s, const AssumptionOptions& opt) {
  Sample out;
  double derivative = 0.0;
  if (const auto closed = closed_derivative(w, coeff, p, s)) {
    derivative = *closed;
  } else {
    const double d = opt.fd_relative_step * s;
    const auto G = [&](double x) { return inner(w, coeff, p, x); };
    const double gm2 = G(s - d), gm1 = G(s - 0.5 * d), g0 = G(s), gp1 = G(s + 0.5 * d),
                 gp2 = G(s + d);
    const double c1 = (gp2 - gm2) / (2.0 * d);
    const double c2 = (gp1 - gm1) / d;
    derivative = (4.0 * c2 - c1) / 3.0;
    const double forward = (gp1 - g0) / (0.5 * d);
    const double backward = (g0 - gm1) / (0.5 * d);
    const double scale = std::max({std::abs(c2), std::abs(forward), std::abs(backward), 1e-300});
    out.nonsmooth = std::abs(c1 - c2) > opt.smoothness_tolerance * scale ||
                    std::abs(forward - backward) > opt.smoothness_tolerance * scale;
  }
  out.value = derivative / denominator(p, w.H(s));
  return out;
}

struct Scan {
  std::vector<double> s;
  std::vector<double> value;
  bool nonsmooth = false;
  double nonsmooth_at = 0.0;
  std::size_t arg = 0;  ///< argmax for upper bounds, argmin otherwise
  double extremum = 0.0;
};

Scan scan(const WeightPair& w, const Coefficient& coeff, const AssumptionParams& p,
          const AssumptionGrid& grid, BoundKind kind, const AssumptionOptions& opt) {
  Scan out;
  out.s = grid.points();
  for (double b : w.breakpoints())
    if (b > grid.s_min && b < grid.s_max) out.s.push_back(b);
  // Kinks of a are sampled on both sides so neither stencil straddles them.
  for (double b : coeff.breakpoints()) {
    for (double x : {b * (1.0 - 1e-4), b * (1.0 + 1e-4)})
      if (x > grid.s_min && x < grid.s_max) out.s.push_back(x);
  }
  std::sort(out.s.begin(), out.s.end());
  out.s.erase(std::unique(out.s.begin(), out.s.end()), out.s.end());
  for (double s : out.s) {
    const Sample smp = sample_quantity(w, coeff, p, s, opt);
    if (smp.nonsmooth && !out.nonsmooth) {
      out.nonsmooth = true;
      out.nonsmooth_at = s;
    }
    out.value.push_back(smp.value);
  }
  const auto it = kind == BoundKind::upper
                      ? std::max_element(out.value.begin(), out.value.end())
                      : std::min_element(out.value.begin(), out.value.end());
  out.arg = static_cast<std::size_t>(it - out.value.begin());
  out.extremum = *it;
  return out;
}

}  // namespace

double assumption_quantity(const WeightPair& w, const Coefficient& coeff,
                           const AssumptionParams& params, double s,
                           const AssumptionOptions& options) {
  if (!(s > 0.0)) throw DomainError("assumption quantities are sampled at s > 0");
  return sample_quantity(w, coeff, params, s, options).value;
}

ConditionReport check_assumption(const WeightPair& w, const Coefficient& coeff,
                                 const AssumptionParams& params, const AssumptionGrid& grid,
                                 const AssumptionOptions& opt) {
  params.validate();
  const bool bounded = params.bounded();
  AssumptionGrid base = grid;
  if (bounded) {
    if (grid.s_max < params.bound)
      throw DomainError("assumption grid must cover [0, M] for bounded-solution assumptions");
    base = grid.clipped(params.bound);
  }
  const BoundKind kind = bound_kind(params.id);
  const Scan coarse = scan(w, coeff, params, base, kind, opt);
  const Scan fine = scan(w, coeff, params, base.refined(bounded), kind, opt);

  ConditionReport r;
  r.condition = std::string(to_string(params.id));
  r.grid = {{"base", base}, {"refined", base.refined(bounded)},
            {"route", closed_derivative(w, coeff, params, base.s_min) ? "closed-form"
                                                                      : "finite-difference"}};
  const char* name = constant_name(params.id);
  r.constants[name] = fine.extremum;
  r.constants[std::string(name) + "_coarse"] = coarse.extremum;
  const double change = std::abs(fine.extremum - coarse.extremum) /
                        std::max(std::abs(coarse.extremum), 1e-300);
  r.constants["relative_change"] = change;

  if (coarse.nonsmooth || fine.nonsmooth) {
    r.verdict = Verdict::inconclusive;
    r.note = "finite differences disagree across step refinement (nonsmooth) near s = " +
             std::to_string(coarse.nonsmooth ? coarse.nonsmooth_at : fine.nonsmooth_at);
    return r;
  }

  const bool at_edge = fine.arg == 0 || fine.arg + 1 == fine.s.size();
  const auto witness = [&](double bound, bool exceeds) {
    Witness wt;
    wt.s = fine.s[fine.arg];
    wt.value = fine.value[fine.arg];
    wt.bound = bound;
    wt.exceeds = exceeds;
    return wt;
  };

  switch (kind) {
    case BoundKind::upper:
      if (std::isfinite(fine.extremum) && change <= opt.stability_tolerance) {
        r.verdict = Verdict::satisfied;
      } else if (fine.extremum > coarse.extremum && at_edge) {
        r.verdict = Verdict::violated;
        r.witness = witness(coarse.extremum, true);
        r.note = "sup grows without bound toward the end of the sampled range";
      } else {
        r.verdict = Verdict::inconclusive;
        r.note = "sup not stable under refinement";
      }
      break;
    case BoundKind::lower_positive:
      if (fine.extremum > 0.0 && change <= opt.stability_tolerance) {
        r.verdict = Verdict::satisfied;
      } else if (fine.extremum <= 0.0) {
        r.verdict = Verdict::violated;
        r.witness = witness(0.0, false);
        if (fine.extremum == 0.0) r.witness->bound = coarse.extremum > 0.0 ? coarse.extremum : 0.0;
        r.note = "lower bound is not positive";
      } else if (fine.extremum < coarse.extremum && at_edge) {
        r.verdict = Verdict::violated;
        r.witness = witness(coarse.extremum, false);
        r.note = "inf decays toward 0 at the end of the sampled range";
      } else {
        r.verdict = Verdict::inconclusive;
        r.note = "inf not stable under refinement";
      }
      break;
    case BoundKind::lower_nonnegative: {
      double scale = 0.0;
      for (double v : fine.value) scale = std::max(scale, std::abs(v));
      const double noise = (r.grid["route"] == "closed-form" ? 1e-12 : 1e-7) * scale;
      if (fine.extremum >= -noise) {
        r.verdict = Verdict::satisfied;
      } else {
        r.verdict = Verdict::violated;
        r.witness = witness(0.0, false);
        r.note = "derivative is negative";
      }
      break;
    }
  }
  return r;
}

double recheck_witness(const WeightPair& w, const Coefficient& coeff,
                       const AssumptionParams& params, const ConditionReport& report,
                       const AssumptionOptions& options) {
  if (!report.witness) throw DomainError("report carries no witness");
  return assumption_quantity(w, coeff, params, report.witness->s, options);
}

}  // namespace degdiff
