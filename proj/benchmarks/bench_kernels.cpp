#include <benchmark/benchmark.h>

#include "bench_data.hpp"

using namespace thoops;

static void BM_Mttkrp(benchmark::State& state) {
    const auto nnz = static_cast<std::size_t>(state.range(0));
    const auto rank = static_cast<std::size_t>(state.range(1));
    const SparseCountTensor t = bench::random_tensor({500, 13, 24}, nnz, 1);
    const CpModel m = bench::random_model(t.dims(), rank, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mttkrp(t, {m.a, m.b, m.c}, Mode::One));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(nnz));
}
BENCHMARK(BM_Mttkrp)->Args({10000, 8})->Args({100000, 8})->Args({100000, 32});

static void BM_FitKl(benchmark::State& state) {
    const SparseCountTensor t = bench::random_tensor({200, 13, 24}, 20000, 3);
    FitConfig fc;
    fc.max_outer_iters = static_cast<int>(state.range(0));
    fc.rel_tol = 1e-12;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_cp_kl(t, 8, fc));
    }
}
BENCHMARK(BM_FitKl)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_KlObjective(benchmark::State& state) {
    const SparseCountTensor t = bench::random_tensor({500, 13, 24}, 100000, 4);
    const CpModel m = bench::random_model(t.dims(), 8, 5);
    for (auto _ : state) benchmark::DoNotOptimize(kl_objective(t, m));
}
BENCHMARK(BM_KlObjective);
