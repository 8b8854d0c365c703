// OpenMP kernels against their serial references. Thread count is the second argument of
// the parallel variants.
#include <benchmark/benchmark.h>
#include <omp.h>

#include <map>

#include "qrr/emulator.hpp"
#include "qrr/lightcone.hpp"
#include "qrr/qrr.hpp"

using namespace qrr;

namespace {

const Graph& host(int m) {
    static std::map<int, Graph> cache;
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, generate_regular(m, 17)).first;
    return it->second;
}

void BM_QaoaStateSerial(benchmark::State& st) {
    const int m = static_cast<int>(st.range(0));
    const auto& g = host(m);
    for (auto _ : st) benchmark::DoNotOptimize(qaoa_state_serial(g.edges(), m, fixed_angles(2)));
    st.SetItemsProcessed(st.iterations() * (std::int64_t(1) << m));
}

void BM_QaoaStateParallel(benchmark::State& st) {
    const int m = static_cast<int>(st.range(0));
    omp_set_num_threads(static_cast<int>(st.range(1)));
    const auto& g = host(m);
    for (auto _ : st) benchmark::DoNotOptimize(qaoa_state(g.edges(), m, fixed_angles(2)));
    st.SetItemsProcessed(st.iterations() * (std::int64_t(1) << m));
}

void BM_ZzSerial(benchmark::State& st) {
    const int m = static_cast<int>(st.range(0));
    auto s = qaoa_state(host(m).edges(), m, fixed_angles(1));
    for (auto _ : st) benchmark::DoNotOptimize(zz_expectation_exact_serial(s, 0, 1));
}

void BM_ZzParallel(benchmark::State& st) {
    const int m = static_cast<int>(st.range(0));
    omp_set_num_threads(static_cast<int>(st.range(1)));
    auto s = qaoa_state(host(m).edges(), m, fixed_angles(1));
    for (auto _ : st) benchmark::DoNotOptimize(zz_expectation_exact(s, 0, 1));
}

// Full p=1 correlation matrix build with a cold class cache.
void BM_CorrelationBuild(benchmark::State& st) {
    omp_set_num_threads(static_cast<int>(st.range(1)));
    auto g = generate_regular(static_cast<int>(st.range(0)), 3);
    for (auto _ : st) {
        CorrelationEngine eng(1, Backend::exact());
        benchmark::DoNotOptimize(eng.build(g));
    }
}

void BM_BruteForce(benchmark::State& st) {
    omp_set_num_threads(static_cast<int>(st.range(1)));
    auto g = generate_regular(static_cast<int>(st.range(0)), 5);
    for (auto _ : st) benchmark::DoNotOptimize(brute_force_maxcut(g));
}

void thread_args(benchmark::internal::Benchmark* b, std::vector<std::int64_t> sizes) {
    const int max_threads = omp_get_max_threads();
    for (auto m : sizes)
        for (int t = 1; t <= max_threads; t *= 2) b->Args({m, t});
}

}  // namespace

BENCHMARK(BM_QaoaStateSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QaoaStateParallel)->Apply([](auto* b) { thread_args(b, {16, 20}); })->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ZzSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ZzParallel)->Apply([](auto* b) { thread_args(b, {16, 20}); })->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CorrelationBuild)->Apply([](auto* b) { thread_args(b, {1024}); })->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteForce)->Apply([](auto* b) { thread_args(b, {24}); })->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
