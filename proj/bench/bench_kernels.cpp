// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <map>

#include "fixtures.hpp"
#include "mkg/complete.hpp"
#include "mkg/embed.hpp"
#include "mkg/rng.hpp"

namespace {

const mkg::graph::GraphStore& scoring_graph(std::size_t materials) {
  static std::map<std::size_t, mkg::graph::GraphStore> cache;
  auto it = cache.find(materials);
  if (it == cache.end()) {
    mkg::Rng rng(11);
    it = cache.emplace(materials, fixtures::random_scoring_graph(rng, materials, materials / 4)).first;
  }
  return it->second;
}

std::vector<mkg::embed::Vector> points(std::size_t n) {
  mkg::Rng rng(12);
  std::vector<mkg::embed::Vector> out(n, mkg::embed::Vector(64));
  for (auto& v : out) {
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
  }
  return out;
}

// Second argument: OpenMP thread count, 0 for the runtime default.
void BM_rank_parallel(benchmark::State& state) {
  const auto& g = scoring_graph(static_cast<std::size_t>(state.range(0)));
  const int saved = omp_get_max_threads();
  if (state.range(1) > 0) omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mkg::complete::rank_candidates(g, {}, 200));
  }
  omp_set_num_threads(saved);
  state.counters["threads"] = state.range(1) > 0 ? state.range(1) : saved;
}

void BM_rank_serial(benchmark::State& state) {
  const auto& g = scoring_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mkg::complete::rank_candidates_serial(g, {}, 200));
  }
}

void BM_neighborhoods_parallel(benchmark::State& state) {
  const auto p = points(static_cast<std::size_t>(state.range(0)));
  const int saved = omp_get_max_threads();
  if (state.range(1) > 0) omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(mkg::embed::neighborhoods(p, 0.3));
  omp_set_num_threads(saved);
  state.counters["threads"] = state.range(1) > 0 ? state.range(1) : saved;
}

void BM_neighborhoods_serial(benchmark::State& state) {
  const auto p = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mkg::embed::neighborhoods_serial(p, 0.3));
}

}  // namespace

BENCHMARK(BM_rank_parallel)->ArgsProduct({{100, 400}, {1, 0}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rank_serial)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_neighborhoods_parallel)->ArgsProduct({{500, 2000}, {1, 0}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_neighborhoods_serial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
