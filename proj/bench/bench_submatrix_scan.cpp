#include <random>

#include <benchmark/benchmark.h>

#include "acnet/submatrix_scan.hpp"

using namespace acnet;

namespace {

/// Random symmetric matrix with a slightly negative spectrum shift, so a
/// realistic share of submatrices is flagged.
SymMatrix scan_input(int n) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(n));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymMatrix w(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < w.size(); ++i) {
    w(i, i) = 2.0 + u(rng);
    for (std::size_t j = i + 1; j < w.size(); ++j) w(i, j) = w(j, i) = u(rng);
  }
  return w;
}

void BM_ScanParallel(benchmark::State& state) {
  const auto w = scan_input(static_cast<int>(state.range(0)));
  const int m = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(violated_submatrices(w, m, 1e-6));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * binomial(static_cast<int>(state.range(0)), m)));
}

void BM_ScanSerial(benchmark::State& state) {
  const auto w = scan_input(static_cast<int>(state.range(0)));
  const int m = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(violated_submatrices_serial(w, m, 1e-6));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * binomial(static_cast<int>(state.range(0)), m)));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int n : {10, 15, 20})
    for (int m : {2, 3, 4}) b->Args({n, m});
}

}  // namespace

BENCHMARK(BM_ScanParallel)->Apply(sizes)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_ScanSerial)->Apply(sizes)->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
