#include <benchmark/benchmark.h>

#include <besovlab/field.hpp>
#include <besovlab/spectral.hpp>

#include <cmath>
#include <numbers>

namespace {

besovlab::Field wave(std::size_t n) {
  const besovlab::Grid g(16 * std::numbers::pi, n);
  return besovlab::Field::sample(g, [](double x) { return std::sin(3 * x) / std::cosh(x / 4); });
}

void BM_Forward(benchmark::State& state) {
  const auto f = wave(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(besovlab::to_spectrum(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Forward)->RangeMultiplier(4)->Range(1 << 10, 1 << 20)->Complexity(benchmark::oNLogN);

void BM_RoundTrip(benchmark::State& state) {
  const auto f = wave(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(besovlab::to_field(besovlab::to_spectrum(f)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RoundTrip)->RangeMultiplier(4)->Range(1 << 10, 1 << 20)->Complexity(benchmark::oNLogN);

void BM_Derivative(benchmark::State& state) {
  const auto f = wave(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(besovlab::derivative(f));
}
BENCHMARK(BM_Derivative)->Arg(1 << 14)->Arg(1 << 18);

}  // namespace
