#include "degdiff/coefficients.hpp"
#include "degdiff/oracles.hpp"
#include "degdiff/pde.hpp"
#include "degdiff/stability.hpp"
#include "degdiff/weights.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace {

using namespace degdiff;

void BM_EvalIPowerLaw(benchmark::State& state) {
  const Coefficient c = Coefficient::power_law(1.0, 0.5);
  const double s = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eval_I(c, s).value);
}
BENCHMARK(BM_EvalIPowerLaw)->Arg(0)->Arg(4)->Arg(8)->Arg(12);

void BM_EvalICounterexample(benchmark::State& state) {
  const SelfSimilarSolution sol(3.0, 2);
  const Coefficient c = make_counterexample(3.0, 2, std::pow(1.1 * sol.s0(), 3.0));
  const double s = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eval_I(c, s).value);
}
BENCHMARK(BM_EvalICounterexample)->Arg(2)->Arg(8);

void BM_Test1Check(benchmark::State& state) {
  const Coefficient c = Coefficient::power_law(1.0, 0.5);
  const LogGrid grid{1e-12, 1.0, 10};
  for (auto _ : state) benchmark::DoNotOptimize(check_test1(c, grid).verdict);
}
BENCHMARK(BM_Test1Check)->Unit(benchmark::kMillisecond);

void BM_SolveBump(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Mesh mesh = Mesh::interval(0.0, 1.0, n);
  const Coefficient c = Coefficient::power_law(1.0, 0.5);
  const std::vector<double> u0 = sample_profile(BumpProfile{0.5, 0.6, 1.0}, mesh);
  const std::vector<double> times{0.05, 0.1};
  for (auto _ : state) {
    const Trajectory traj = solve_ibvp(c, mesh, u0, 0.1, times);
    benchmark::DoNotOptimize(traj.states.back().data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_SolveBump)->Arg(101)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);

void BM_SolveRadial(benchmark::State& state) {
  const Mesh mesh = Mesh::radial(1.0, 3, 201);
  const Coefficient c = Coefficient::power_law(1.0, 1.0);
  const std::vector<double> u0 = sample_profile(BumpProfile{0.0, 1.2, 1.0}, mesh);
  const std::vector<double> times{0.05};
  for (auto _ : state) {
    const Trajectory traj = solve_ibvp(c, mesh, u0, 0.05, times);
    benchmark::DoNotOptimize(traj.states.back().data());
  }
}
BENCHMARK(BM_SolveRadial)->Unit(benchmark::kMillisecond);

void BM_SelfSimilarResidual(benchmark::State& state) {
  const SelfSimilarSolution sol(3.0, 2);
  const Coefficient c = make_counterexample(3.0, 2, std::pow(1.1 * sol.s0(), 3.0));
  const int ns = static_cast<int>(state.range(0));
  const auto pts = similarity_grid(1.2 * sol.s0(), 3.0, ns, 0.1, 0.9, 17);
  for (auto _ : state) benchmark::DoNotOptimize(residual(sol, c, pts).max_relative);
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}
BENCHMARK(BM_SelfSimilarResidual)->Arg(60)->Arg(240);

void BM_ComputeY(benchmark::State& state) {
  const Mesh mesh = Mesh::interval(0.0, 1.0, 201);
  const Coefficient c = Coefficient::power_law(2.0, 0.5);
  const std::vector<double> u0 = sample_profile(BumpProfile{0.5, 0.6, 1.0}, mesh);
  std::vector<double> times;
  for (int i = 1; i <= 20; ++i) times.push_back(0.05 * i);
  const Trajectory traj = solve_ibvp(c, mesh, u0, 1.0, times);
  const WeightPair w = WeightPair::power(0.0);
  for (auto _ : state) benchmark::DoNotOptimize(compute_Y(traj, w, 2.0).values.data());
}
BENCHMARK(BM_ComputeY);

}  // namespace

BENCHMARK_MAIN();
