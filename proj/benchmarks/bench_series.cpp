#include <benchmark/benchmark.h>

#include "thetavanish/huffing.hpp"
#include "thetavanish/theta.hpp"

using namespace thetavanish;

static void BM_ThetaSum(benchmark::State& st) {
  const Window w{0, st.range(0)};
  for (auto _ : st) benchmark::DoNotOptimize(theta_sum({1, 3, 5}, w));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_ThetaSum)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

static void BM_ThetaProd(benchmark::State& st) {
  const Window w{0, st.range(0)};
  for (auto _ : st) benchmark::DoNotOptimize(theta_prod({1, 3, 5}, w));
}
BENCHMARK(BM_ThetaProd)->RangeMultiplier(4)->Range(256, 4096);

// eta-quotient style product with negative powers
static void BM_PochProduct(benchmark::State& st) {
  const Window w{0, st.range(0)};
  const std::vector<PochFactor> f{{1, 1, 1, 5}, {1, 5, 5, -1}, {-1, 2, 4, 2}};
  for (auto _ : st) benchmark::DoNotOptimize(poch_product(f, w));
}
BENCHMARK(BM_PochProduct)->RangeMultiplier(4)->Range(256, 4096);

static void BM_Huff(benchmark::State& st) {
  const auto g = theta_sum({0, 1, 2}, {0, st.range(0)});
  for (auto _ : st) benchmark::DoNotOptimize(huff(g, 7));
}
BENCHMARK(BM_Huff)->RangeMultiplier(4)->Range(1024, 65536);

static void BM_VanishesOn(benchmark::State& st) {
  const auto g = poch_product({{1, 1, 1, 1}, {1, 1, 2, 1}}, {0, st.range(0)});
  for (auto _ : st) benchmark::DoNotOptimize(vanishes_on(g, 5, 3));
}
BENCHMARK(BM_VanishesOn)->Arg(1024)->Arg(4096);
BENCHMARK_MAIN();
