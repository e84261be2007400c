#include <benchmark/benchmark.h>

#include <vector>

#include "gkdv/diagnostics.hpp"
#include "gkdv/modulation.hpp"
#include "gkdv/profiles.hpp"
#include "gkdv/scattering.hpp"
#include "gkdv/solver.hpp"

using namespace gkdv;

namespace {

const std::vector<SolitonParams> kPair{{1.0, -20.0, 1}, {4.0, 20.0, 1}};

void BM_Step(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Exponent p(static_cast<int>(state.range(1)));
  const GridSpec g(128, n, 1e-3);
  SpectralSolver solver(g, p);
  Field u = sample_soliton({1.0, 0.0, 1}, p, g);
  for (auto _ : state) {
    u = solver.step(u);
    benchmark::DoNotOptimize(u);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_Step)->ArgsProduct({{256, 1024, 4096}, {2, 3, 5}})->Unit(benchmark::kMicrosecond);

void BM_Invariants(benchmark::State& state) {
  const GridSpec g(128, static_cast<std::size_t>(state.range(0)), 1e-3);
  const Field u = superpose(kPair, Exponent(2), g).field;
  for (auto _ : state) benchmark::DoNotOptimize(conserved(u));
}
BENCHMARK(BM_Invariants)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);

void BM_DecomposeFull(benchmark::State& state) {
  const GridSpec g(128, static_cast<std::size_t>(state.range(0)), 1e-3);
  const Field u = superpose(kPair, Exponent(2), g).field;
  const std::vector<SolitonParams> guess{{1.0, -19.9, 1}, {4.0, 20.05, 1}};
  for (auto _ : state) benchmark::DoNotOptimize(decompose_full(u, guess));
}
BENCHMARK(BM_DecomposeFull)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_SchrodingerSpectrum(benchmark::State& state) {
  const GridSpec g(128, static_cast<std::size_t>(state.range(0)), 1e-3);
  const Field u = superpose(kPair, Exponent(2), g).field;
  for (auto _ : state) benchmark::DoNotOptimize(schrodinger_spectrum(u));
}
BENCHMARK(BM_SchrodingerSpectrum)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_ZsSpectrum(benchmark::State& state) {
  const GridSpec g(64, static_cast<std::size_t>(state.range(0)), 1e-3);
  const Field u = sample_breather({1.0, 1.0, 0.0, 0.0}, g);
  for (auto _ : state) benchmark::DoNotOptimize(zs_spectrum(u));
}
BENCHMARK(BM_ZsSpectrum)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_WeinsteinF(benchmark::State& state) {
  const GridSpec g(128, 1024, 1e-3);
  const Field u = superpose(kPair, Exponent(2), g).field;
  const std::vector<ProfileTerm> terms{{1.0, -20.0, 1}, {4.0, 20.0, 1}};
  const Partition part(1.0, {0.0});
  for (auto _ : state) benchmark::DoNotOptimize(weinstein_F(u, terms, part, 0.1));
}
BENCHMARK(BM_WeinsteinF)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
