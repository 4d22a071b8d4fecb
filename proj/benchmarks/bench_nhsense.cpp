#include <benchmark/benchmark.h>

#include <numbers>

#include "nhsense/nhsense.hpp"

using namespace nhsense;

namespace {

constexpr double kPi = std::numbers::pi;

void BM_Invert(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChainParams c = from_hopping(n, 1.0, 3.0 / (n - 1), 1.0);
  const DynMatrix h = build_htilde(c, PerturbationSpec(PerturbationKind::Nhse, 1e-3, kPi / 2), n);
  for (auto _ : state) benchmark::DoNotOptimize(invert(h));
}
BENCHMARK(BM_Invert)->Arg(3)->Arg(7)->Arg(15);

void BM_ColumnSolveInverse(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChainParams c = from_hopping(n, 1.0, 3.0 / (n - 1), 1.0);
  const DynMatrix h = build_htilde(c, PerturbationSpec(PerturbationKind::Nhse, 1e-3, kPi / 2), n);
  for (auto _ : state) benchmark::DoNotOptimize(column_solve_inverse(h.data));
}
BENCHMARK(BM_ColumnSolveInverse)->Arg(3)->Arg(7)->Arg(15);

void BM_ExactFirstColumn(benchmark::State& state) {
  const ChainParams c = from_hopping(7, 1.0, 0.5, 1.0);
  for (auto _ : state) {
    const ExactFirstColumn f = htilde_inverse_exact_first_column(c, 0.01, 0.7);
    benchmark::DoNotOptimize(expand_first_column(c, f));
  }
}
BENCHMARK(BM_ExactFirstColumn);

void BM_SnrReport(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Regime regime = state.range(1) ? Regime::Beyond : Regime::Linear;
  const ChainParams c = from_hopping(n, 1.0, 1.5, 1.0);
  const DriveSpec d(1e3, 0.0, n);
  const PerturbationSpec p(PerturbationKind::Nhse, 1e-8, kPi / 2);
  for (auto _ : state) benchmark::DoNotOptimize(snr_report(c, d, p, HomodyneSpec(0.0), regime));
}
BENCHMARK(BM_SnrReport)->Args({3, 0})->Args({9, 0})->Args({15, 0})->Args({9, 1});

void BM_BestMeasurementAngle(benchmark::State& state) {
  const ChainParams c = from_hopping(5, 1.0, 0.8, 1.0);
  const DriveSpec d(1e3, 0.0, 1);
  const PerturbationSpec p(PerturbationKind::LocalN, 1e-6);
  for (auto _ : state) benchmark::DoNotOptimize(best_measurement_angle(c, d, p, 1.0));
}
BENCHMARK(BM_BestMeasurementAngle);

void BM_IntegrateMeans(benchmark::State& state) {
  const ChainParams c = from_hopping(5, 1.0, 0.5, 1.0);
  const DriveSpec d(2.0, 0.3, 5);
  const PerturbationSpec p(PerturbationKind::Nhse, 0.01, kPi / 2);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_means(c, d, p, 2000.0, 0.01));
}
BENCHMARK(BM_IntegrateMeans)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
