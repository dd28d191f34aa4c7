// Serial reference kernels against their OpenMP counterparts.
// Thread count follows DISPERSIA_THREADS / OMP_NUM_THREADS.

#include "dispersia/scaling.hpp"

#include <benchmark/benchmark.h>

using namespace dispersia;

namespace {

MapGrid bench_grid() {
  MapGrid g;
  g.nx = 81;
  g.nz = 40;
  return g;
}

void BM_MapSerial(benchmark::State& state) {
  const MapGrid grid = bench_grid();
  for (auto _ : state) benchmark::DoNotOptimize(enhancement_map_serial(1.0, grid));
  state.SetItemsProcessed(state.iterations() * grid.nx * grid.nz);
}

void BM_MapParallel(benchmark::State& state) {
  const MapGrid grid = bench_grid();
  for (auto _ : state) benchmark::DoNotOptimize(enhancement_map(1.0, grid));
  state.SetItemsProcessed(state.iterations() * grid.nx * grid.nz);
}

template <ScaleFamily Family>
void BM_ScaleSerial(benchmark::State& state) {
  const auto x = log_spaced(1e-3, 1e2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scale_function_serial(Family, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <ScaleFamily Family>
void BM_ScaleParallel(benchmark::State& state) {
  const auto x = log_spaced(1e-3, 1e2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scale_function(Family, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TableSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify_scaling_table_serial());
}

void BM_TableParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify_scaling_table());
}

}  // namespace

BENCHMARK(BM_MapSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MapParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScaleSerial<ScaleFamily::Plate>)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScaleParallel<ScaleFamily::Plate>)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScaleSerial<ScaleFamily::Sphere>)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScaleParallel<ScaleFamily::Sphere>)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TableSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TableParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
