// Serial reference vs OpenMP kernels. Both variants produce identical
// results; only the wall time differs.

#include "wfb/bernstein.hpp"
#include "wfb/wf_chain.hpp"
#include "wfb/wf_diffusion.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace {

void BM_absorption_serial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(wfb::absorption_prob_mc_serial(state.range(0), 0.3, 20000, 10000, wfb::kDefaultSeed));
}
void BM_absorption_omp(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(wfb::absorption_prob_mc(state.range(0), 0.3, 20000, 10000, wfb::kDefaultSeed));
}
BENCHMARK(BM_absorption_serial)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_absorption_omp)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_euler_serial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(wfb::euler_maruyama_ensemble_serial(0.5, 0.5, 1e-3, state.range(0), wfb::kDefaultSeed));
}
void BM_euler_omp(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(wfb::euler_maruyama_ensemble(0.5, 0.5, 1e-3, state.range(0), wfb::kDefaultSeed));
}
BENCHMARK(BM_euler_serial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_euler_omp)->Arg(10000)->Unit(benchmark::kMillisecond);

std::vector<double> probe(std::size_t dim) {
  std::vector<double> v(dim);
  for (std::size_t j = 0; j < dim; ++j) v[j] = std::cos(0.01 * static_cast<double>(j));
  return v;
}

void BM_matvec_serial(benchmark::State& state) {
  const wfb::TransitionMatrix<double> P(state.range(0));
  const auto v = probe(P.dim());
  for (auto _ : state) benchmark::DoNotOptimize(P.apply_serial(v));
}
void BM_matvec_omp(benchmark::State& state) {
  const wfb::TransitionMatrix<double> P(state.range(0));
  const auto v = probe(P.dim());
  for (auto _ : state) benchmark::DoNotOptimize(P.apply(v));
}
BENCHMARK(BM_matvec_serial)->Arg(256)->Arg(2048);
BENCHMARK(BM_matvec_omp)->Arg(256)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
