// SPDX-License-Identifier: Apache-2.0
#include <numbers>

#include <benchmark/benchmark.h>

#include "patchdg/discretization.hpp"
#include "patchdg/eigensolve.hpp"

using namespace patchdg;

namespace {

Discretization square(int n, int m) { return discretize(generate_square_tri(n, std::numbers::pi), m); }

void BM_BuildSpace(benchmark::State& state) {
  const Mesh mesh = generate_square_tri(int(state.range(0)), std::numbers::pi);
  const FaceTopology topo = build_topology(mesh);
  const int m = int(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(build_space(mesh, topo, m));
  state.SetItemsProcessed(state.iterations() * mesh.num_elements());
}
BENCHMARK(BM_BuildSpace)->Args({16, 1})->Args({16, 3})->Args({32, 2})->Unit(benchmark::kMillisecond);

void BM_AssembleLaplace(benchmark::State& state) {
  const Discretization d = square(int(state.range(0)), int(state.range(1)));
  FormConfig cfg;
  cfg.m = int(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system(d, cfg));
  state.SetItemsProcessed(state.iterations() * d.num_dofs());
}
BENCHMARK(BM_AssembleLaplace)->Args({16, 1})->Args({16, 3})->Args({32, 2})->Unit(benchmark::kMillisecond);

void BM_AssemblePlate(benchmark::State& state) {
  const Discretization d = square(int(state.range(0)), int(state.range(1)));
  FormConfig cfg;
  cfg.problem = Problem::Biharmonic;
  cfg.bc = BoundaryCondition::SimplySupported;
  cfg.m = int(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system(d, cfg));
  state.SetItemsProcessed(state.iterations() * d.num_dofs());
}
BENCHMARK(BM_AssemblePlate)->Args({16, 2})->Args({16, 3})->Unit(benchmark::kMillisecond);

void BM_SmallestEigenpairs(benchmark::State& state) {
  const Discretization d = square(int(state.range(0)), 2);
  FormConfig cfg;
  cfg.m = 2;
  const SystemMatrices sys = assemble_system(d, cfg);
  const Index k = state.range(1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_smallest(sys.stiffness, sys.mass, k));
}
BENCHMARK(BM_SmallestEigenpairs)->Args({16, 10})->Args({32, 10})->Args({32, 40})->Unit(benchmark::kMillisecond);

void BM_DenseSpectrum(benchmark::State& state) {
  const Discretization d = square(int(state.range(0)), 1);
  FormConfig cfg;
  const SystemMatrices sys = assemble_system(d, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(solve_dense(sys.stiffness, sys.mass));
}
BENCHMARK(BM_DenseSpectrum)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
