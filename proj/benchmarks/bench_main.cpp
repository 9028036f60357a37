#include <benchmark/benchmark.h>

#include "walklab/gh_metric.hpp"
#include "walklab/harnack.hpp"
#include "walklab/ifs.hpp"
#include "walklab/kernels.hpp"
#include "walklab/lattice.hpp"
#include "walklab/renorm.hpp"
#include "walklab/resistance.hpp"
#include "walklab/tree.hpp"

using namespace walklab;

static void BM_SmoothedKernelGasket(benchmark::State& state) {
  const auto g = build_prefractal(sierpinski_gasket(), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(smoothed_table(g, g.root(), 200));
  state.SetItemsProcessed(state.iterations() * 200 * static_cast<long>(g.num_vertices()));
}
BENCHMARK(BM_SmoothedKernelGasket)->DenseRange(3, 6);

static void BM_EnergyChain(benchmark::State& state) {
  const auto g = build_prefractal(sierpinski_gasket(), 3);
  const auto profile = resistance_profile(g, g.root());
  for (auto _ : state) benchmark::DoNotOptimize(verify_energy_chain(g, g.root(), 500, profile));
}
BENCHMARK(BM_EnergyChain)->Unit(benchmark::kMillisecond);

static void BM_ResistanceProfile(benchmark::State& state) {
  const auto g = build_prefractal(sierpinski_gasket(), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(resistances_from(g, g.root()));
}
BENCHMARK(BM_ResistanceProfile)->DenseRange(3, 6)->Unit(benchmark::kMicrosecond);

static void BM_LambdaFixedPoint(benchmark::State& state) {
  const auto ifs = state.range(0) == 0 ? sierpinski_gasket() : vicsek_cross();
  const auto c0 = ConductanceSet::uniform(ifs.v0.size());
  for (auto _ : state) benchmark::DoNotOptimize(lambda_fixed_point(ifs, c0));
}
BENCHMARK(BM_LambdaFixedPoint)->Arg(0)->Arg(1);

static void BM_PhiConstant(benchmark::State& state) {
  const auto g = build_prefractal(sierpinski_gasket(), 3);
  const Cylinder cyl(g, 0, 4.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(phi_constant(g, cyl));
}
BENCHMARK(BM_PhiConstant)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_TreeCodec(benchmark::State& state) {
  const auto t = sample_uniform_tree(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(tree_from_excursion(excursion_from_tree(t)));
}
BENCHMARK(BM_TreeCodec)->RangeMultiplier(4)->Range(64, 4096);

static void BM_DeltaExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_space(n, 4, 1);
  const auto b = random_space(n, 4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(delta_distance(a, b, DeltaMode::exact));
}
BENCHMARK(BM_DeltaExact)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

static void BM_DeltaHeuristic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_space(n, 4, 1);
  const auto b = random_space(n, 4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(delta_distance(a, b, DeltaMode::heuristic));
}
BENCHMARK(BM_DeltaHeuristic)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
