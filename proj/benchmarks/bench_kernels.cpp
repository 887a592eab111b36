#include <benchmark/benchmark.h>

#include <random>

#include "covent/dynamic_entropy.hpp"
#include "covent/families.hpp"
#include "covent/set_cover.hpp"
#include "covent/static_entropy.hpp"
#include "covent/verify/random.hpp"

using namespace covent;

namespace {

SystemPtr golden() { return share(SymbolicSystem::sft({{1, 1}, {1, 0}})); }

SetFamily overlap(const SystemPtr& g) {
  return SetFamily::from_words(Carrier::words(g, 2), {{{0, 0}, {1, 0}}, {{0, 1}, {1, 0}}}, FamilyKind::Cover);
}

void BM_DynamicalJoin(benchmark::State& state) {
  const auto U = overlap(golden());
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dynamical_join(U, 0, N - 1));
}
BENCHMARK(BM_DynamicalJoin)->DenseRange(4, 12, 4);

void BM_MinSetCover(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int n = static_cast<int>(state.range(0));
  std::vector<std::vector<BitSet>> cases;
  for (int i = 0; i < 32; ++i) {
    std::vector<BitSet> sets;
    for (const auto& s : verify::random_cover_sets(rng, n, 12)) {
      BitSet b(n);
      for (int p : s) b.set(p);
      sets.push_back(std::move(b));
    }
    cases.push_back(std::move(sets));
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(min_set_cover(cases[i++ % cases.size()], BitSet::full(n)));
}
BENCHMARK(BM_MinSetCover)->Arg(16)->Arg(32)->Arg(64);

void BM_CoverEntropy(benchmark::State& state) {
  auto g = golden();
  const auto mu = InvariantMeasure::markov(g, {{0.6, 0.4}, {1.0, 0.0}});
  const auto ladder = join_ladder(overlap(g), static_cast<int>(state.range(0)));
  const auto& U = ladder.back();
  const auto d = distribution(mu, U.carrier());
  for (auto _ : state) benchmark::DoNotOptimize(cover_entropy(d, U));
}
BENCHMARK(BM_CoverEntropy)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
