#include <benchmark/benchmark.h>

#include "hecurve/counting.hpp"
#include "hecurve/curve.hpp"
#include "hecurve/verifier.hpp"

using namespace hecurve;

namespace {

void BM_naive(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int64_t p = state.range(1);
  CurveMatrix a = random_smooth_curve(n, p, 1);
  ExtField f = ExtField::make(PrimeField(p), 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(count_naive(a, f));
}
BENCHMARK(BM_naive)->Args({3, 13})->Args({4, 13})->Args({5, 13})->Args({4, 31});

void BM_charsum(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int64_t p = state.range(1);
  int k = static_cast<int>(state.range(2));
  CurveMatrix a = random_smooth_curve(n, p, 1);
  ExtField f = ExtField::make(PrimeField(p), k, 0);
  for (auto _ : state) benchmark::DoNotOptimize(count_charsum(a, f));
}
BENCHMARK(BM_charsum)
    ->Args({3, 13, 1})
    ->Args({4, 13, 1})
    ->Args({5, 13, 1})
    ->Args({4, 101, 1})
    ->Args({4, 13, 2})
    ->Args({4, 11, 3});

void BM_charsum_threads(benchmark::State& state) {
  CurveMatrix a = random_smooth_curve(5, 13, 1);
  ExtField f = ExtField::make(PrimeField(13), 1, 0);
  int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_charsum(a, f, {}, threads));
}
BENCHMARK(BM_charsum_threads)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_full_verify(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int64_t p = state.range(1);
  CurveMatrix a = random_smooth_curve(n, p, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(full_verify(a, p, 1, CountMethod::auto_select, nullptr, {}, 4));
}
BENCHMARK(BM_full_verify)->Args({4, 7})->Args({5, 5})->Args({6, 7});

void BM_fixed_locus(benchmark::State& state) {
  CurveMatrix a = random_smooth_curve(static_cast<int>(state.range(0)), 11, 1);
  for (auto _ : state) benchmark::DoNotOptimize(fixed_locus_count(a, 0));
}
BENCHMARK(BM_fixed_locus)->Arg(4)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
