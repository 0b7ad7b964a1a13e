#include <benchmark/benchmark.h>

#include <random>

#include "toposfactor/factorization.hpp"
#include "toposfactor/proetale.hpp"
#include "toposfactor/sites.hpp"
#include "toposfactor/universe.hpp"

using namespace toposfactor;

namespace {

std::vector<FinFunctor> random_functors(std::size_t objects, std::size_t count) {
  std::mt19937_64 rng(1);
  std::vector<FinFunctor> out;
  while (out.size() < count) {
    const auto c = random_category(rng, objects, 2);
    const auto d = random_category(rng, objects, 2);
    if (auto f = random_functor(rng, c, d)) out.push_back(*f);
  }
  return out;
}

void BM_EnumerateCategories(benchmark::State& state) {
  const UniverseBounds bounds{static_cast<std::size_t>(state.range(0)), 2};
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_categories(bounds));
}
BENCHMARK(BM_EnumerateCategories)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Factorize(benchmark::State& state) {
  const auto fs = random_functors(static_cast<std::size_t>(state.range(0)), 64);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(comprehensive_factorize(fs[i++ % fs.size()]));
}
BENCHMARK(BM_Factorize)->Arg(3)->Arg(4);

void BM_TerminallyConnected(benchmark::State& state) {
  const auto fs = random_functors(static_cast<std::size_t>(state.range(0)), 64);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_terminally_connected_essential(fs[i++ % fs.size()]));
  }
}
BENCHMARK(BM_TerminallyConnected)->Arg(3)->Arg(4);

void BM_EtaOrthogonal(benchmark::State& state) {
  const auto fs = random_functors(3, 64);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(eta_orthogonal(fs[i++ % fs.size()]));
}
BENCHMARK(BM_EtaOrthogonal);

void BM_Sheafify(benchmark::State& state) {
  const auto sq = fixtures::sq();
  const auto tops = all_topologies(sq);
  const auto x = constant_presheaf(sq, static_cast<std::size_t>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sheafify(x, tops[i++ % tops.size()]));
}
BENCHMARK(BM_Sheafify)->Arg(1)->Arg(2)->Arg(3);

void BM_AllTopologies(benchmark::State& state) {
  const auto sq = fixtures::sq();
  for (auto _ : state) benchmark::DoNotOptimize(all_topologies(sq));
}
BENCHMARK(BM_AllTopologies);

void BM_Localize(benchmark::State& state) {
  const auto sq = fixtures::sq();
  FunctorDescription raw{"D", {{"0", "l"}, {"1", "top"}}, {}};
  const auto diag = CofilteredDiagram::make(validate_functor(raw, fixtures::arrow(), sq));
  const auto mol = build_oplax_colimit(diag, full_slice_system(diag));
  for (auto _ : state) benchmark::DoNotOptimize(localize(mol));
}
BENCHMARK(BM_Localize);

}  // namespace
BENCHMARK_MAIN();
