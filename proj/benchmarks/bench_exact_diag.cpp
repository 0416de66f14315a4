#include <benchmark/benchmark.h>

#include "sce/entanglement.hpp"
#include "sce/exact_diag.hpp"

namespace {

void BM_XxzGroundState(benchmark::State& state, sce::EdSolver solver) {
  const int L = static_cast<int>(state.range(0));
  sce::EdOptions options;
  options.solver = solver;
  for (auto _ : state) {
    const auto gs = sce::xxz_ground_state(sce::XxzSpec{L, 0.5}, options);
    benchmark::DoNotOptimize(sce::summary_from_weights(sce::rdm_weights(gs, (L + 1) / 2)).S1);
  }
}
BENCHMARK_CAPTURE(BM_XxzGroundState, dense, sce::EdSolver::Dense)->Arg(9)->Arg(11)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_XxzGroundState, krylov, sce::EdSolver::Krylov)
    ->Arg(11)
    ->Arg(13)
    ->Arg(15)
    ->Unit(benchmark::kMillisecond);

}  // namespace
