// Serial reference against the OpenMP paths of the three parallel kernels.
// Run with OMP_NUM_THREADS set to the number of cores to compare.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "dofd/cq.hpp"
#include "dofd/laplace.hpp"

using namespace dofd;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

const KernelSymbol& kernel() {
  static const WeightFunction mu = WeightFunction::poly_half_squared();
  static const KernelSymbol k(mu, AlphaQuadrature::composite(mu));
  return k;
}

void BM_SolveResolvents(benchmark::State& state) {
  const FemSystem sys(static_cast<int>(state.range(1)));
  const DofVector vh = project_initial(sys, InitialData::smooth_sin());
  const ContourPlan plan = build_plan(13, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_resolvents(plan, sys, kernel(), vh, exec_of(state)));
}
BENCHMARK(BM_SolveResolvents)->ArgsProduct({{0, 1}, {10000, 100000}})->Unit(benchmark::kMillisecond);

void BM_HistorySums(benchmark::State& state) {
  const auto dofs = static_cast<std::size_t>(state.range(1));
  const std::size_t stride = 320;
  std::vector<double> history(dofs * stride), rev(stride + 1), out(dofs);
  for (std::size_t i = 0; i < history.size(); ++i) history[i] = std::sin(1e-3 * static_cast<double>(i));
  for (std::size_t m = 0; m <= stride; ++m) rev[m] = -1.0 / (1.0 + static_cast<double>(m));
  for (auto _ : state) {
    history_sums(history, stride, rev, static_cast<int>(stride), out, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_HistorySums)->ArgsProduct({{0, 1}, {10000, 100000}})->Unit(benchmark::kMicrosecond);

void BM_WeightsFft(benchmark::State& state) {
  const int N = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(weights_fft(kernel(), 1.0 / N, N, exec_of(state)));
}
BENCHMARK(BM_WeightsFft)->ArgsProduct({{0, 1}, {320, 100000}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
