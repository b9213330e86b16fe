#include <benchmark/benchmark.h>

#include <random>

#include "khdetect/corpus.hpp"
#include "khdetect/detect.hpp"
#include "khdetect/exactalg.hpp"
#include "khdetect/gridfloer.hpp"
#include "khdetect/khovanov.hpp"
#include "khdetect/linkdiag.hpp"

using namespace khdetect;

namespace {

const char* const kNames[] = {"hopf", "trefoil_left", "L4a1", "L2", "L7n1", "L6a3"};

void BM_KhRanks(benchmark::State& state) {
  const auto& e = *corpus::find(corpus::builtin(), kNames[state.range(0)]);
  const linkdiag::PDLink link = corpus::entry_link(e);
  khovanov::KhOptions o;
  o.field = state.range(1) ? exactalg::Field::Q : exactalg::Field::F2;
  for (auto _ : state) benchmark::DoNotOptimize(khovanov::kh_ranks(link, o));
  state.SetLabel(e.name + (state.range(1) ? " Q" : " F2"));
}
BENCHMARK(BM_KhRanks)->ArgsProduct({{0, 1, 2, 3, 4, 5}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_TildeHomology(benchmark::State& state) {
  const auto& e = *corpus::find(corpus::builtin(), kNames[state.range(0)]);
  const gridfloer::GridDiagram g = *corpus::entry_grid(e);
  for (auto _ : state) benchmark::DoNotOptimize(gridfloer::tilde_homology(g));
  state.SetLabel(e.name + " n=" + std::to_string(g.size()));
}
BENCHMARK(BM_TildeHomology)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

void BM_EulerChar(benchmark::State& state) {
  const auto& e = *corpus::find(corpus::builtin(), kNames[state.range(0)]);
  const gridfloer::GridDiagram g = *corpus::entry_grid(e);
  for (auto _ : state) benchmark::DoNotOptimize(gridfloer::euler_char(g));
  state.SetLabel(e.name);
}
BENCHMARK(BM_EulerChar)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

void BM_RankF2(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  exactalg::F2Matrix m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m.set(r, c, rng() & 1);
  for (auto _ : state) benchmark::DoNotOptimize(exactalg::rank_f2(m));
}
BENCHMARK(BM_RankF2)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  const linkdiag::PDLink link = corpus::entry_link(*corpus::find(corpus::builtin(), "L7n1"));
  for (auto _ : state) benchmark::DoNotOptimize(detect::classify(link));
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
