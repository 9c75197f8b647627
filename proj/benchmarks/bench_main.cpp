#include <benchmark/benchmark.h>

#include "graphgauge/liealg.hpp"
#include "graphgauge/sampler.hpp"
#include "graphgauge/wilson.hpp"

using namespace graphgauge;

namespace {

void BM_expm5(benchmark::State& state) {
  Rng rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix5 a = Matrix5::Zero();
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < i; ++j) {
      a(i, j) = u(rng);
      a(j, i) = -a(i, j);
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(expm5(a));
}
BENCHMARK(BM_expm5);

void BM_haar(benchmark::State& state) {
  Rng rng(2);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(haar_random_sun(n, rng));
}
BENCHMARK(BM_haar)->Arg(2)->Arg(3);

void BM_wilson_action(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const LatticeGraph g = LatticeGraph::hypercubic({l, l, l, l}, true);
  Rng rng(3);
  const LinkField lf = LinkField::haar_random(g, 3, rng);
  const ActionOptions opts{1, state.range(1) != 0};
  for (auto _ : state) benchmark::DoNotOptimize(wilson_action(lf, g, 6.0, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.plaquettes().size()));
}
BENCHMARK(BM_wilson_action)->Args({4, 0})->Args({4, 1})->Args({8, 0});

void BM_metropolis_sweep(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const LatticeGraph g = LatticeGraph::hypercubic({l, l, l, l}, true);
  Rng rng(4);
  LinkField lf = LinkField::haar_random(g, 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(metropolis_sweep(lf, g, 2.3, 0.5, rng));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(lf.link_count()));
}
BENCHMARK(BM_metropolis_sweep)->Arg(4)->Arg(8);

}  // namespace
BENCHMARK_MAIN();
