#include "grflag/groebner.hpp"
#include "grflag/lattice.hpp"
#include "grflag/lie_data.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace grflag;

namespace {

IntMatrix random_matrix(std::size_t rows, std::size_t cols, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dist(-9, 9);
  IntMatrix m(rows, IntRow(cols));
  for (auto& r : m)
    for (auto& x : r) x = dist(rng);
  return m;
}

Exec exec_of(const benchmark::State& s) { return s.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_Hermite(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  IntMatrix m = random_matrix(2 * n, n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(hermite_normal_form(m, n, exec_of(state)));
}

void BM_Smith(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  IntMatrix m = random_matrix(n, n, 11);
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(m, n, exec_of(state)));
}

void BM_BuchbergerSpin11(benchmark::State& state) {
  const auto& ideal = load_case("spin11").flag_ideal->ideal;
  BuchbergerOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(buchberger(ideal.generators, opts));
}

}  // namespace

BENCHMARK(BM_Hermite)->ArgsProduct({{32, 96}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Smith)->ArgsProduct({{16, 48}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuchbergerSpin11)->ArgsProduct({{0}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
