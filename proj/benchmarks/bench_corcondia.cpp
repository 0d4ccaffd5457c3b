#include <benchmark/benchmark.h>

#include "bench_data.hpp"
#include "thoops/corcondia.hpp"

using namespace thoops;

static void BM_CorcondiaFast(benchmark::State& state) {
    const auto i = static_cast<std::size_t>(state.range(0));
    const auto rank = static_cast<std::size_t>(state.range(1));
    const SparseCountTensor t = bench::random_tensor({i, 13, 5}, i * 20, 6);
    const CpModel m = bench::random_model(t.dims(), rank, 7);
    for (auto _ : state) benchmark::DoNotOptimize(corcondia_fast(t, m));
}
BENCHMARK(BM_CorcondiaFast)->Args({30, 4})->Args({300, 4})->Args({3000, 6})->Unit(benchmark::kMicrosecond);

static void BM_CorcondiaReference(benchmark::State& state) {
    const auto i = static_cast<std::size_t>(state.range(0));
    const auto rank = static_cast<std::size_t>(state.range(1));
    const SparseCountTensor t = bench::random_tensor({i, 13, 5}, i * 20, 6);
    const CpModel m = bench::random_model(t.dims(), rank, 7);
    for (auto _ : state) benchmark::DoNotOptimize(corcondia_reference(t, m));
}
BENCHMARK(BM_CorcondiaReference)->Args({30, 4})->Args({300, 4})->Unit(benchmark::kMicrosecond);
