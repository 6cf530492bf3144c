#include "blindssr/power_lab.hpp"
#include "blindssr/rng.hpp"

#include <benchmark/benchmark.h>

using namespace blindssr;

namespace {
const DesignSpec kSpec(0.025, 0.80, 1.0, 0.5);
}

static void BM_NormalDraws(benchmark::State& state) {
    Xoshiro256pp rng(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(BM_NormalDraws);

static void BM_NoncentralChi2Draws(benchmark::State& state) {
    Xoshiro256pp rng(1, 0);
    const int df = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(rng.noncentral_chi_squared(df, 1.25));
}
BENCHMARK(BM_NoncentralChi2Draws)->Arg(9)->Arg(119)->Arg(299);

static void BM_SimulateTrials(benchmark::State& state) {
    const TruthScenario scenario(1.0, 0.0, 2.038);
    const int nz = static_cast<int>(state.range(0));
    SimOptions opts;
    opts.confidence = 0.60;
    opts.threads = 1;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_trials(Method::Proposed, scenario, kSpec, nz, nz,
                                                 10000, seed++, opts));
    }
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_SimulateTrials)->Arg(2)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_SampleSizeDistribution(benchmark::State& state) {
    const TruthScenario scenario(1.0, 0.0, 11.08);
    SimOptions opts;
    opts.confidence = 0.57;
    opts.threads = 1;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_size_distribution(
            Method::Proposed, scenario, kSpec, 10, 10, 100000, seed++, opts));
    }
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_SampleSizeDistribution)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
