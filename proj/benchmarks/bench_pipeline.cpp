#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "qoplab/bochner.hpp"
#include "qoplab/qkernel.hpp"
#include "qoplab/spectral.hpp"

using namespace qoplab;

namespace {

HermitianOperator renormalized(const ManifoldModel& m, int p) {
  return renormalize(assemble_bochner(m, assemble_phases(m, p)), compute_tau(m), p, Potential::zero(m));
}

// Args: N, p.
void BM_Assemble(benchmark::State& state) {
  const auto m = build_model(ModelKind::kFlatTorus2, static_cast<int>(state.range(0)));
  const int p = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(renormalized(m, p));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(m.size()));
}
BENCHMARK(BM_Assemble)->Args({32, 8})->Args({64, 16})->Args({128, 16})->Unit(benchmark::kMillisecond);

void BM_Eigensolve(benchmark::State& state, SolverPath path) {
  const auto m = build_model(ModelKind::kFlatTorus2, static_cast<int>(state.range(0)));
  const int p = static_cast<int>(state.range(1));
  const auto op = renormalized(m, p);
  EigenOptions o;
  o.path = path;
  // block sized as the harness does: bound states plus the first excited cluster
  o.initial_count = static_cast<std::size_t>(2 * p + 8);
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose_below(op, 2 * std::numbers::pi * p, o));
}
BENCHMARK_CAPTURE(BM_Eigensolve, dense, SolverPath::kDense)->Args({24, 8})->Args({32, 16})
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Eigensolve, iterative, SolverPath::kIterative)->Args({24, 8})->Args({32, 16})
    ->Args({64, 16})->Unit(benchmark::kMillisecond);

void BM_ApplyQ(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0)), p = static_cast<int>(state.range(1));
  const auto m = build_model(ModelKind::kFlatTorus2, n);
  const auto op = renormalized(m, p);
  EigenOptions o;
  o.path = SolverPath::kIterative;
  o.initial_count = static_cast<std::size_t>(2 * p + 8);
  const auto d = eigendecompose_below(op, 2 * std::numbers::pi * p, o);
  const auto q = build_q(projector_kernel(d, detect_bound_cluster(d, 2 * std::numbers::pi, p)), m);
  const auto f = GridFunction::sample(m, [](const Position& x) { return std::cos(2 * std::numbers::pi * x[0]); });
  for (auto _ : state) benchmark::DoNotOptimize(apply_q(q, f));
}
BENCHMARK(BM_ApplyQ)->Args({32, 16})->Args({64, 16})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
