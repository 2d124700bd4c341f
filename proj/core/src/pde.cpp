#include "degdiff/pde.hpp"

#include "degdiff/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace degdiff {
namespace {

std::string num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

Mesh Mesh::interval(double x_lo, double x_hi, int n) {
  Mesh m;
  m.geometry = Geometry::interval;
  m.x_lo = x_lo;
  m.x_hi = x_hi;
  m.n = n;
  m.dimension = 1;
  m.validate();
  return m;
}

Mesh Mesh::radial(double radius, int dimension, int n) {
  Mesh m;
  m.geometry = Geometry::radial;
  m.x_lo = 0.0;
  m.x_hi = radius;
  m.n = n;
  m.dimension = dimension;
  m.validate();
  return m;
}

void Mesh::validate() const {
  if (n < 3) throw ParameterError("mesh needs at least 3 nodes");
  if (!(x_hi > x_lo) || !std::isfinite(x_lo) || !std::isfinite(x_hi))
    throw ParameterError("mesh needs x_lo < x_hi");
  if (geometry == Geometry::radial) {
    if (dimension < 1) throw ParameterError("radial mesh needs dimension N >= 1");
    if (x_lo != 0.0) throw ParameterError("radial mesh starts at r = 0");
  }
}

std::string_view to_string(Mesh::Geometry g) {
  return g == Mesh::Geometry::interval ? "interval" : "radial";
}

std::vector<double> Mesh::nodes() const {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = x(i);
  out.back() = x_hi;
  return out;
}

std::vector<double> Mesh::quadrature_weights() const {
  std::vector<double> w(n, dr());
  w.front() *= 0.5;
  w.back() *= 0.5;
  if (geometry == Geometry::radial && dimension > 1)
    for (int i = 0; i < n; ++i) w[i] *= std::pow(x(i), dimension - 1);
  return w;
}

bool Mesh::is_boundary(int i) const {
  if (i == n - 1) return true;
  return geometry == Geometry::interval && i == 0;
}

std::vector<double> sample_profile(const InitialProfile& profile, const Mesh& mesh) {
  mesh.validate();
  std::vector<double> u(mesh.n, 0.0);
  const double length = mesh.x_hi - mesh.x_lo;
  for (int i = 0; i < mesh.n; ++i) {
    const double x = mesh.x(i);
    if (const auto* b = std::get_if<BumpProfile>(&profile)) {
      const double xi = (x - b->center) / (0.5 * b->width);
      if (std::abs(xi) < 1.0) u[i] = b->height * (1.0 - xi * xi) * (1.0 - xi * xi);
    } else if (const auto* s = std::get_if<SineProfile>(&profile)) {
      u[i] = s->amplitude * std::sin(s->mode * M_PI * (x - mesh.x_lo) / length);
    } else {
      const auto& t = std::get<TableProfile>(profile);
      if (t.x.size() != t.u.size() || t.x.size() < 2)
        throw ParameterError("table profile needs matching x/u arrays of length >= 2");
      if (x < t.x.front() || x > t.x.back()) continue;
      const auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
      const std::size_t k = std::min<std::size_t>(it - t.x.begin(), t.x.size() - 1);
      const double x0 = t.x[k - 1], x1 = t.x[k];
      const double th = x1 > x0 ? (x - x0) / (x1 - x0) : 0.0;
      u[i] = (1.0 - th) * t.u[k - 1] + th * t.u[k];
    }
  }
  for (int i = 0; i < mesh.n; ++i) {
    if (mesh.is_boundary(i)) u[i] = 0.0;
    if (!(u[i] >= 0.0)) throw DomainError("initial profile must be nonnegative");
  }
  return u;
}

namespace {

struct Stencil {
  std::vector<double> left, right;  // coefficients of u_{i−1}−u_i and u_{i+1}−u_i
};

Stencil make_stencil(const Mesh& mesh) {
  Stencil st{std::vector<double>(mesh.n, 0.0), std::vector<double>(mesh.n, 0.0)};
  const int N = mesh.dimension;
  for (int i = 0; i < mesh.n; ++i) {
    if (mesh.is_boundary(i)) continue;
    if (mesh.geometry == Mesh::Geometry::interval) {
      st.left[i] = st.right[i] = 1.0;
    } else if (i == 0) {
      st.right[i] = 2.0 * N;
    } else {
      st.left[i] = std::pow((i - 0.5) / i, N - 1);
      st.right[i] = std::pow((i + 0.5) / i, N - 1);
    }
  }
  return st;
}

}  // namespace

Trajectory solve_ibvp(const Coefficient& coeff, const Mesh& mesh, std::span<const double> u0,
                      double t_end, std::span<const double> output_times,
                      const SolverOptions& options) {
  mesh.validate();
  if (static_cast<int>(u0.size()) != mesh.n)
    throw ParameterError("initial data size does not match the mesh");
  if (!(t_end > 0.0)) throw ParameterError("t_end must be positive");
  if (!(options.cfl > 0.0 && options.cfl <= 0.5)) throw ParameterError("cfl must lie in (0, 0.5]");
  for (int i = 0; i < mesh.n; ++i) {
    if (!(u0[i] >= 0.0)) throw DomainError("initial data must be nonnegative");
    if (mesh.is_boundary(i) && u0[i] != 0.0)
      throw DomainError("initial data must vanish on the boundary");
  }
  std::vector<double> targets;
  for (double t : output_times) {
    if (!(t >= 0.0 && t <= t_end)) throw ParameterError("output times must lie in [0, t_end]");
    if (!targets.empty() && !(t > targets.back()))
      throw ParameterError("output times must be strictly increasing");
    if (t > 0.0) targets.push_back(t);
  }
  if (targets.empty() || targets.back() < t_end) targets.push_back(t_end);

  Trajectory traj;
  traj.mesh = mesh;
  traj.times.push_back(0.0);
  traj.states.emplace_back(u0.begin(), u0.end());

  const Stencil st = make_stencil(mesh);
  const double dr2 = mesh.dr() * mesh.dr();
  std::vector<double> u(u0.begin(), u0.end()), next(u.size()), a(u.size());
  double t = 0.0;
  long total_steps = 0;

  for (double target : targets) {
    StepLogEntry log;
    log.t_start = t;
    log.t_end = target;
    log.dt_min = std::numeric_limits<double>::infinity();
    while (t < target) {
      double rate = 0.0;
      for (int i = 0; i < mesh.n; ++i) {
        a[i] = mesh.is_boundary(i) ? 0.0 : coeff(u[i]);
        rate = std::max(rate, a[i] * (st.left[i] + st.right[i]));
      }
      double dt = target - t;
      bool last = true;
      if (rate > 0.0) {
        const double dt_cfl = options.cfl * 2.0 * dr2 / rate;
        if (dt_cfl < options.dt_floor)
          throw StiffnessError("CFL step " + num(dt_cfl) + " underflows at t = " + num(t));
        const double projected = static_cast<double>(total_steps) + (t_end - t) / dt_cfl;
        if (projected > options.max_steps)
          throw StiffnessError("CFL step " + num(dt_cfl) + " at t = " + num(t) +
                               " needs about " + num(projected) + " steps, above the budget of " +
                               num(options.max_steps));
        if (dt_cfl < dt) {
          dt = dt_cfl;
          last = false;
        }
      }
      for (int i = 0; i < mesh.n; ++i) {
        if (a[i] == 0.0) {
          next[i] = u[i];
          continue;
        }
        const double nu = dt * a[i] / dr2;
        const double left = i > 0 ? st.left[i] * u[i - 1] : 0.0;
        const double right = st.right[i] * u[i + 1];
        next[i] = (1.0 - nu * (st.left[i] + st.right[i])) * u[i] + nu * (left + right);
        if (!(next[i] >= 0.0))
          throw InternalInvariantError("negative value at node " + std::to_string(i));
      }
      u.swap(next);
      t = last ? target : t + dt;
      ++log.steps;
      ++total_steps;
      log.dt_min = std::min(log.dt_min, dt);
      log.dt_max = std::max(log.dt_max, dt);
      log.cfl_max = std::max(log.cfl_max, dt * rate / (2.0 * dr2));
    }
    if (log.steps == 0) log.dt_min = 0.0;
    traj.times.push_back(target);
    traj.states.push_back(u);
    traj.step_log.push_back(log);
  }
  return traj;
}

std::string_view to_string(FrontReport::Verdict v) {
  return v == FrontReport::Verdict::finite_speed_consistent ? "finite-speed-consistent"
                                                            : "immediate-positivity";
}

FrontReport detect_front(const Trajectory& traj, Interval ball, double epsilon,
                         std::optional<double> eps_supp) {
  const Mesh& mesh = traj.mesh;
  if (traj.states.empty()) throw DomainError("trajectory has no states");
  if (!(ball.lo < ball.hi) || ball.lo < mesh.x_lo || ball.hi > mesh.x_hi)
    throw DomainError("ball must be a nonempty interval inside the mesh domain");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0,1)");

  FrontReport r;
  r.ball = ball;
  r.epsilon = epsilon;
  const double c = 0.5 * (ball.lo + ball.hi);
  const double half = 0.5 * epsilon * (ball.hi - ball.lo);
  r.shrunk_ball = {c - half, c + half};
  r.times = traj.times;

  const auto& u0 = traj.states.front();
  const double peak = *std::max_element(u0.begin(), u0.end());
  const double base = eps_supp.value_or(peak > 0.0 ? 1e-10 * peak
                                                   : std::numeric_limits<double>::min());
  if (!(base > 0.0)) throw ParameterError("eps_supp must be positive");
  for (int j = 0; j <= 4; ++j) r.thresholds.push_back(base * std::pow(10.0, j));

  std::vector<int> in_ball, in_shrunk;
  for (int i = 0; i < mesh.n; ++i) {
    const double x = mesh.x(i);
    if (x >= ball.lo && x <= ball.hi) in_ball.push_back(i);
    if (x >= r.shrunk_ball.lo && x <= r.shrunk_ball.hi) in_shrunk.push_back(i);
  }
  if (in_shrunk.empty()) throw DomainError("shrunk ball contains no mesh node");
  for (int i : in_ball)
    if (u0[i] >= base) throw DomainError("initial data does not vanish on the ball");

  const std::size_t nt = traj.times.size();
  bool all_immediate = nt > 1;
  for (double thr : r.thresholds) {
    double tp = traj.times.back();
    for (std::size_t m = 0; m < nt; ++m) {
      const bool hit = std::any_of(in_shrunk.begin(), in_shrunk.end(),
                                   [&](int i) { return traj.states[m][i] >= thr; });
      if (hit) {
        tp = traj.times[m];
        break;
      }
    }
    r.t_prime.push_back(tp);
    bool hit_first = false;
    if (nt > 1)
      hit_first = std::any_of(in_shrunk.begin(), in_shrunk.end(),
                              [&](int i) { return traj.states[1][i] >= thr; });
    all_immediate = all_immediate && hit_first;

    std::vector<std::vector<Interval>> per_time;
    for (std::size_t m = 0; m < nt; ++m) {
      std::vector<Interval> runs;
      const auto& s = traj.states[m];
      for (int i = 0; i < mesh.n; ++i) {
        if (s[i] < thr) continue;
        const int start = i;
        while (i + 1 < mesh.n && s[i + 1] >= thr) ++i;
        runs.push_back({mesh.x(start), mesh.x(i)});
      }
      per_time.push_back(std::move(runs));
    }
    r.support.push_back(std::move(per_time));
  }
  r.verdict = all_immediate ? FrontReport::Verdict::immediate_positivity
                            : FrontReport::Verdict::finite_speed_consistent;
  return r;
}

namespace {

double profile(TestFunction::Shape shape, Interval sup, double x) {
  const double half = 0.5 * (sup.hi - sup.lo);
  const double xi = (x - 0.5 * (sup.lo + sup.hi)) / half;
  if (std::abs(xi) >= 1.0) return 0.0;
  if (shape == TestFunction::Shape::tent) return 1.0 - std::abs(xi);
  return (1.0 - xi * xi) * (1.0 - xi * xi);
}

// Tent kinks (ξ ∈ {−1, 0, 1}, to 1e-9) get the mean of the one-sided slopes.
double profile_derivative(TestFunction::Shape shape, Interval sup, double x) {
  const double half = 0.5 * (sup.hi - sup.lo);
  const double xi = (x - 0.5 * (sup.lo + sup.hi)) / half;
  if (shape == TestFunction::Shape::tent) {
    constexpr double kink = 1e-9;
    const double slope = 1.0 / half;
    if (std::abs(xi) < kink) return 0.0;
    if (std::abs(std::abs(xi) - 1.0) < kink) return xi > 0.0 ? -0.5 * slope : 0.5 * slope;
    if (std::abs(xi) > 1.0) return 0.0;
    return xi > 0.0 ? -slope : slope;
  }
  if (std::abs(xi) >= 1.0) return 0.0;
  return -4.0 * xi * (1.0 - xi * xi) / half;
}

double trapezoid_in_time(const std::vector<double>& t, const std::vector<double>& f) {
  double sum = 0.0;
  for (std::size_t m = 1; m < t.size(); ++m) sum += 0.5 * (t[m] - t[m - 1]) * (f[m] + f[m - 1]);
  return sum;
}

}  // namespace

double TestFunction::value(double x, double t) const {
  return amplitude * profile(shape, x_support, x) * profile(shape, t_support, t);
}

double TestFunction::dt(double x, double t) const {
  return amplitude * profile(shape, x_support, x) * profile_derivative(shape, t_support, t);
}

double weak_residual(const Trajectory& traj, const WeightPair& w, const Coefficient& coeff,
                     std::span<const TestFunction> test_fns) {
  if (test_fns.empty()) return 0.0;
  const Mesh& mesh = traj.mesh;
  const double dr = mesh.dr();
  const std::vector<double> qw = mesh.quadrature_weights();
  const std::size_t nt = traj.times.size();

  std::vector<std::vector<double>> Hu(nt, std::vector<double>(mesh.n));
  std::vector<std::vector<double>> Fu(nt, std::vector<double>(mesh.n));
  for (std::size_t m = 0; m < nt; ++m)
    for (int i = 0; i < mesh.n; ++i) {
      Hu[m][i] = eval_H(w, traj.states[m][i]);
      Fu[m][i] = eval_F(w, coeff, traj.states[m][i]);
    }
  std::vector<double> cell_measure(mesh.n - 1, dr);
  if (mesh.geometry == Mesh::Geometry::radial && mesh.dimension > 1)
    for (int i = 0; i + 1 < mesh.n; ++i)
      cell_measure[i] *= std::pow(mesh.x(i) + 0.5 * dr, mesh.dimension - 1);

  double worst = -std::numeric_limits<double>::infinity();
  for (const TestFunction& phi : test_fns) {
    if (phi.x_support.lo < mesh.x_lo || phi.x_support.hi > mesh.x_hi ||
        !(phi.x_support.lo < phi.x_support.hi))
      throw DomainError("test function support leaves the spatial domain");
    if (phi.t_support.lo < traj.times.front() || phi.t_support.hi > traj.times.back() ||
        !(phi.t_support.lo < phi.t_support.hi))
      throw DomainError("test function support leaves the trajectory's time span");
    std::vector<double> lhs(nt, 0.0), rhs(nt, 0.0);
    for (std::size_t m = 0; m < nt; ++m) {
      const double t = traj.times[m];
      const auto& u = traj.states[m];
      for (int i = 0; i + 1 < mesh.n; ++i) {
        const double gu = (u[i + 1] - u[i]) / dr;
        const double gphi = (Fu[m][i + 1] * phi.value(mesh.x(i + 1), t) -
                             Fu[m][i] * phi.value(mesh.x(i), t)) / dr;
        lhs[m] += cell_measure[i] * gu * gphi;
      }
      for (int i = 0; i < mesh.n; ++i) rhs[m] += qw[i] * Hu[m][i] * phi.dt(mesh.x(i), t);
    }
    worst = std::max(worst, trapezoid_in_time(traj.times, lhs) - trapezoid_in_time(traj.times, rhs));
  }
  return worst;
}

}  // namespace degdiff
