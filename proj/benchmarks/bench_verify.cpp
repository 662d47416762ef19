#include <benchmark/benchmark.h>

#include "thetavanish/criteria.hpp"
#include "thetavanish/verify.hpp"

using namespace thetavanish;

namespace {
const FamilySpec kSpec{Family::I_2, 2, 2, 2, 1, 0, 1, 0};
}

static void BM_BuildProductForm(benchmark::State& st) {
  const Window w = default_window(kSpec, st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(build_family_series(kSpec, w));
}
BENCHMARK(BM_BuildProductForm)->Arg(20)->Arg(100);

static void BM_BuildDirect(benchmark::State& st) {
  const Window w = default_window(kSpec, st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(build_family_series_direct(kSpec, w));
}
BENCHMARK(BM_BuildDirect)->Arg(20)->Arg(100);

static void BM_CriteriaHat(benchmark::State& st) {
  CriterionInput in;
  in.M = 5; in.A = 2; in.Aprime = 0; in.B = 3; in.Bprime = 1;
  in.u = 2; in.v = 3; in.w = -4;
  for (auto _ : st) benchmark::DoNotOptimize(pair_cancel_hat(in));
}
BENCHMARK(BM_CriteriaHat);

static void BM_StrategyTrace(benchmark::State& st) {
  const Window w = default_window(kSpec);
  for (auto _ : st) benchmark::DoNotOptimize(strategy_trace(kSpec, w));
}
BENCHMARK(BM_StrategyTrace);

static void BM_VerifyFamily(benchmark::State& st) {
  VerifyOptions opt;
  opt.certify = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(verify_family(kSpec, opt));
}
BENCHMARK(BM_VerifyFamily)->Arg(0)->Arg(1);

static void BM_GridI1(benchmark::State& st) {
  const auto grid = family_grid(Family::I_1, 1, {1});
  for (auto _ : st)
    for (const auto& s : grid) benchmark::DoNotOptimize(verify_family(s));
  st.counters["instances"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_GridI1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
