#include <benchmark/benchmark.h>

#include "bilocal/criteria.hpp"
#include "bilocal/network.hpp"
#include "bilocal/scan.hpp"

namespace {

using namespace bilocal;

void BM_SwapXParams(benchmark::State& state) {
  const XParams a = t_to_x(werner(0.8)), b = alpha_state(0.6);
  for (auto _ : state) benchmark::DoNotOptimize(entanglement_swap(a, b));
}
BENCHMARK(BM_SwapXParams);

void BM_AnalyticBound(benchmark::State& state) {
  const XParams a = t_to_x(werner(0.8)), b = alpha_state(0.6);
  for (auto _ : state) benchmark::DoNotOptimize(analytic_bound_b1(a, b));
}
BENCHMARK(BM_AnalyticBound);

void BM_MaximizeB(benchmark::State& state) {
  const XParams a = t_to_x(werner(0.8)), b = alpha_state(0.6);
  MaximizeOptions opts;
  opts.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(maximize_b(a, b, opts));
}
BENCHMARK(BM_MaximizeB)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SufficiencyReport(benchmark::State& state) {
  const TParams a{0.8, -0.6, 0.8}, b = werner(0.9);
  for (auto _ : state) benchmark::DoNotOptimize(sufficiency_report(a, b));
}
BENCHMARK(BM_SufficiencyReport);

void BM_ScanFigure(benchmark::State& state) {
  const auto cfg = ScanConfig::figure(static_cast<int>(state.range(0)), 0.01);
  std::size_t n = 0;
  for (auto _ : state) {
    n = 0;
    for_each_scan_record(cfg, [&](const ScanRecord&) { ++n; });
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_ScanFigure)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
