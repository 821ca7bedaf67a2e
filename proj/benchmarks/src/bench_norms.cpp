#include <benchmark/benchmark.h>

#include <besovlab/cutoffs.hpp>
#include <besovlab/norms.hpp>

#include <cmath>
#include <numbers>

namespace bl = besovlab;

namespace {

void BM_BuildCutoffs(benchmark::State& state) {
  const bl::Grid g(16 * std::numbers::pi, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bl::build_cutoffs(g));
}
BENCHMARK(BM_BuildCutoffs)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);

void BM_BesovNorm(benchmark::State& state) {
  const bl::Grid g(16 * std::numbers::pi, static_cast<std::size_t>(state.range(0)));
  const bl::CutoffSystem cs = bl::build_cutoffs(g);
  const auto f = bl::Field::sample(g, [](double x) { return std::sin(40 * x) / std::cosh(x); });
  bl::BesovIndex idx;
  idx.p = static_cast<double>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(bl::besov_norm(f, idx, cs));
  state.counters["blocks"] = cs.max_block() + 2;
}
BENCHMARK(BM_BesovNorm)->ArgsProduct({{1 << 12, 1 << 16}, {1, 2, 4}});

void BM_Lipschitz(benchmark::State& state) {
  const bl::Grid g(16 * std::numbers::pi, 1 << 16);
  const auto f = bl::Field::sample(g, [](double x) { return std::sin(40 * x) / std::cosh(x); });
  for (auto _ : state) benchmark::DoNotOptimize(bl::lipschitz_norm(f));
}
BENCHMARK(BM_Lipschitz);

}  // namespace
