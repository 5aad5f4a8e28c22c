// Serial reference vs OpenMP for the point-parallel checks.
//
//   ./bench_checks --benchmark_filter=Involution

#include <benchmark/benchmark.h>

#include "binoether/parallel.hpp"
#include "binoether/system.hpp"
#include "binoether/verify.hpp"

using namespace binoether;

namespace {

CheckConfig config(const benchmark::State& state) {
  CheckConfig cfg;
  cfg.samples = 256;
  cfg.policy = state.range(1) == 0 ? ExecutionPolicy::Serial : ExecutionPolicy::OpenMP;
  return cfg;
}

void label(benchmark::State& state) {
  state.SetLabel(std::string(to_string(config(state).policy)) + ", " + std::to_string(parallel_thread_count()) +
                 " threads");
  state.SetItemsProcessed(state.iterations() * 256);
}

void BM_Jacobi(benchmark::State& state) {
  const SystemSpec s = builtin("dissipative", static_cast<int>(state.range(0)));
  const CheckConfig cfg = config(state);
  for (auto _ : state) benchmark::DoNotOptimize(check_jacobi(s.W, cfg));
  label(state);
}

void BM_YangBaxter(benchmark::State& state) {
  const SystemSpec s = builtin("dissipative", static_cast<int>(state.range(0)));
  const CheckConfig cfg = config(state);
  for (auto _ : state) benchmark::DoNotOptimize(check_yang_baxter(s.E, s.W, cfg));
  label(state);
}

void BM_Spectrum(benchmark::State& state) {
  const SystemSpec s = builtin("dissipative", static_cast<int>(state.range(0)));
  const MultiVectorField what = lie_derivative_mv(s.E, s.W);
  const CheckConfig cfg = config(state);
  for (auto _ : state) benchmark::DoNotOptimize(check_spectrum(s.W, what, cfg));
  label(state);
}

void BM_Involution(benchmark::State& state) {
  const SystemSpec s = builtin("dissipative", static_cast<int>(state.range(0)));
  const CheckConfig cfg = config(state);
  for (auto _ : state) benchmark::DoNotOptimize(check_involution(s.W, s.E, cfg));
  label(state);
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int n : {2, 4, 6})
    for (int policy : {0, 1}) b->Args({n, policy});
  b->ArgNames({"n", "omp"})->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_Jacobi)->Apply(sizes);
BENCHMARK(BM_YangBaxter)->Apply(sizes);
BENCHMARK(BM_Spectrum)->Apply(sizes);
BENCHMARK(BM_Involution)->Apply(sizes);

BENCHMARK_MAIN();
