#include <benchmark/benchmark.h>

#include "bench_data.hpp"
#include "thoops/analytics.hpp"

using namespace thoops;

namespace {

QuerySpec corner_query() {
    QuerySpec q;
    q.spatial = Vector::Zero(13);
    q.spatial(7) = q.spatial(8) = 1.0;
    q.temporal = Vector::Zero(24);
    q.temporal.head(5).setOnes();
    q.theta = 0.3;
    return q;
}

}  // namespace

// zone x shot clock x possession, roughly 33 nonzeros per possession.
static void BM_IndexQuery(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComponentIndex index = build_component_index(bench::random_model({13, 24, n}, 8, 8));
    const QuerySpec q = corner_query();
    for (auto _ : state) benchmark::DoNotOptimize(query(index, q));
}
BENCHMARK(BM_IndexQuery)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);

static void BM_LinearScan(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SparseCountTensor t = bench::random_tensor({13, 24, n}, 33 * n, 9);
    const QuerySpec q = corner_query();
    for (auto _ : state) benchmark::DoNotOptimize(linear_scan_oracle(t, q, 2.0));
}
BENCHMARK(BM_LinearScan)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);
