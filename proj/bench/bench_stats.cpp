// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "aai/stats.hpp"

namespace {

std::vector<double> sample(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

aai::stats::Statistic mean_of(const std::vector<double>& v) {
    return [&v](std::span<const std::size_t> idx) {
        double s = 0.0;
        for (auto i : idx) s += v[i];
        return s / static_cast<double>(idx.size());
    };
}

void BM_BootstrapParallel(benchmark::State& state) {
    const auto v = sample(static_cast<std::size_t>(state.range(0)), 1);
    const aai::stats::ResamplePlan plan{aai::stats::ResampleMode::iid, 2000, 0, 7, 0.95};
    for (auto _ : state) benchmark::DoNotOptimize(aai::stats::bootstrap_replicates(v.size(), mean_of(v), plan));
}

void BM_BootstrapSerial(benchmark::State& state) {
    const auto v = sample(static_cast<std::size_t>(state.range(0)), 1);
    const aai::stats::ResamplePlan plan{aai::stats::ResampleMode::iid, 2000, 0, 7, 0.95};
    for (auto _ : state) benchmark::DoNotOptimize(aai::stats::serial::bootstrap_replicates(v.size(), mean_of(v), plan));
}

void BM_TheilSenParallel(benchmark::State& state) {
    const auto x = sample(static_cast<std::size_t>(state.range(0)), 2);
    const auto y = sample(x.size(), 3);
    for (auto _ : state) benchmark::DoNotOptimize(aai::stats::theil_sen(x, y));
}

void BM_TheilSenSerial(benchmark::State& state) {
    const auto x = sample(static_cast<std::size_t>(state.range(0)), 2);
    const auto y = sample(x.size(), 3);
    for (auto _ : state) benchmark::DoNotOptimize(aai::stats::serial::theil_sen(x, y));
}

}  // namespace

BENCHMARK(BM_BootstrapParallel)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapSerial)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TheilSenParallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TheilSenSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
