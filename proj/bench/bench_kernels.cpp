// Serial reference vs OpenMP for the hot loops. Run with
//   build/bench/fermicov_bench --benchmark_filter=dgamma
#include <benchmark/benchmark.h>

#include "fermicov/kernels.hpp"
#include "fermicov/random.hpp"
#include "fermicov/verify.hpp"

using namespace fermicov;

namespace {

template <CMatrix (*F)(const CMatrix&)>
void bm_dgamma(benchmark::State& st) {
  Rng rng(1);
  const CMatrix h = random_gue(rng, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(F(h));
  st.SetComplexityN(st.range(0));
}

template <CMatrix (*F)(const CVector&)>
void bm_annihilator(benchmark::State& st) {
  Rng rng(2);
  const CVector psi = random_cvector(rng, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(F(psi));
}

template <RMatrix (*F)(const std::vector<double>&, const DiscreteTorus&, std::optional<double>)>
void bm_kernel_table(benchmark::State& st) {
  const DiscreteTorus t(1.0, static_cast<int>(st.range(0)));
  std::vector<double> lambdas;
  for (int i = 0; i < 256; ++i) lambdas.push_back(-50.0 + 0.37 * i);
  for (auto _ : st) benchmark::DoNotOptimize(F(lambdas, t, std::nullopt));
}

void bm_bound_suite(benchmark::State& st) {
  const GeneratorConfig cfg;
  const bool parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(bound_check_suite(500, cfg, 42, 0, parallel));
}

}  // namespace

BENCHMARK(bm_dgamma<kernels::serial::dgamma>)->Name("dgamma/serial")->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_dgamma<kernels::omp::dgamma>)->Name("dgamma/omp")->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_annihilator<kernels::serial::annihilator>)->Name("annihilator/serial")->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_annihilator<kernels::omp::annihilator>)->Name("annihilator/omp")->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_kernel_table<kernels::serial::kernel_table>)->Name("kernel_table/serial")->Arg(64)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_kernel_table<kernels::omp::kernel_table>)->Name("kernel_table/omp")->Arg(64)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_bound_suite)->Name("bound_check_suite")->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
