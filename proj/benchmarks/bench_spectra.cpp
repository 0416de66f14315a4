#include <benchmark/benchmark.h>

#include <random>

#include "sce/entanglement.hpp"
#include "sce/free_fermion.hpp"

namespace {

void BM_XxIntervalSpectrum(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto spec = sce::single_particle_energies(sce::xx_correlations_infinite(L));
    benchmark::DoNotOptimize(sce::summary_from_single_particle(spec).S1);
  }
  state.SetComplexityN(L);
}
BENCHMARK(BM_XxIntervalSpectrum)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond)->Complexity();

void BM_TfimHalfChain(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto corr = sce::ground_state_correlations(sce::build_bdg(sce::FermionModelSpec::tfim_open(L, 0.8)));
    const auto spec = sce::single_particle_energies(corr, sce::IndexRange{0, static_cast<std::size_t>(L / 2)});
    benchmark::DoNotOptimize(spec.epsilons().data());
  }
}
BENCHMARK(BM_TfimHalfChain)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ManyBodySpectrum(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::vector<double> z(40);
  for (auto& x : z) x = u(rng);
  const auto spec = sce::EntanglementSpectrum::from_occupations(z);
  const auto M = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sce::many_body_spectrum(spec, M).weight_sum);
}
BENCHMARK(BM_ManyBodySpectrum)->RangeMultiplier(10)->Range(100, 100000);

}  // namespace
