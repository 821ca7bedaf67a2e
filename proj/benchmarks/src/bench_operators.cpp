#include <benchmark/benchmark.h>

#include <besovlab/families.hpp>
#include <besovlab/integrator.hpp>
#include <besovlab/nonlocal.hpp>

#include <cmath>
#include <numbers>

namespace bl = besovlab;

namespace {

bl::Field bump(std::size_t n) {
  const bl::Grid g(16 * std::numbers::pi, n);
  return bl::Field::sample(g, [](double x) { return 0.5 / std::cosh(x); });
}

void BM_Rhs(benchmark::State& state) {
  const auto kind = static_cast<bl::EquationKind>(state.range(0));
  const auto u = bump(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(bl::rhs(kind, u));
}
BENCHMARK(BM_Rhs)
    ->ArgNames({"kind", "N"})
    ->ArgsProduct({{static_cast<long>(bl::EquationKind::CamassaHolm), static_cast<long>(bl::EquationKind::Novikov)},
                   {1 << 12, 1 << 16}});

void BM_Solve(benchmark::State& state) {
  const auto kind = static_cast<bl::EquationKind>(state.range(0));
  const auto u0 = bump(1024);
  const bl::CutoffSystem cs = bl::build_cutoffs(u0.grid());
  bl::SolveConfig sc;
  sc.final_time = 0.1;
  sc.snapshot_times = {0.1};
  for (auto _ : state) benchmark::DoNotOptimize(bl::solve(kind, u0, sc, cs, bl::BesovIndex{}));
}
BENCHMARK(BM_Solve)
    ->Arg(static_cast<long>(bl::EquationKind::CamassaHolm))
    ->Arg(static_cast<long>(bl::EquationKind::Novikov))
    ->Unit(benchmark::kMillisecond);

void BM_MakeFamily(benchmark::State& state) {
  const auto params = bl::FamilyParams::for_kind(bl::EquationKind::CamassaHolm, static_cast<int>(state.range(0)), 1.2, 2.0);
  const bl::Grid g = bl::recommend_grid(params, 1e-6);
  const bl::CutoffSystem cs = bl::build_cutoffs(g);
  for (auto _ : state) benchmark::DoNotOptimize(bl::make_family(params, g, cs));
  state.counters["N"] = static_cast<double>(g.size());
}
BENCHMARK(BM_MakeFamily)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

}  // namespace
