#include "blindssr/calibration.hpp"
#include "blindssr/distributions.hpp"

#include <benchmark/benchmark.h>

using namespace blindssr;

static void BM_StdNormalCdf(benchmark::State& state) {
    double x = -3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(std_normal_cdf(x));
        x += 1e-6;
    }
}
BENCHMARK(BM_StdNormalCdf);

static void BM_StdNormalQuantile(benchmark::State& state) {
    double p = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(std_normal_quantile_upper(p));
        p = p < 0.98 ? p + 1e-4 : 0.01;
    }
}
BENCHMARK(BM_StdNormalQuantile);

static void BM_Chi2Cdf(benchmark::State& state) {
    const CentralChiSq dist(static_cast<int>(state.range(0)));
    double w = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(chi2_cdf(dist, w));
        w = w < 2.0 * dist.df ? w + 0.1 : 1.0;
    }
}
BENCHMARK(BM_Chi2Cdf)->Arg(11)->Arg(99)->Arg(299);

static void BM_Chi2QuantileUpper(benchmark::State& state) {
    const CentralChiSq dist(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(chi2_quantile_upper(dist, 0.62));
    }
}
BENCHMARK(BM_Chi2QuantileUpper)->Arg(11)->Arg(299);

static void BM_NoncentralChi2Cdf(benchmark::State& state) {
    const NoncentralChiSq dist(19, static_cast<double>(state.range(0)));
    double w = 5.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(noncentral_chi2_cdf(dist, w));
        w = w < 60.0 ? w + 0.25 : 5.0;
    }
}
BENCHMARK(BM_NoncentralChi2Cdf)->Arg(1)->Arg(10)->Arg(100);

static void BM_TQuantileUpper(benchmark::State& state) {
    const int df = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(t_quantile_upper(df, 0.025));
    }
}
BENCHMARK(BM_TQuantileUpper)->Arg(10)->Arg(62)->Arg(346);

static void BM_LowerBoundPower(benchmark::State& state) {
    const DesignSpec spec(0.025, 0.80, 1.0, 0.5);
    const int n_int = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lower_bound_power(0.60, n_int, spec));
    }
}
BENCHMARK(BM_LowerBoundPower)->Arg(4)->Arg(20)->Arg(80);

static void BM_CalibrateGamma(benchmark::State& state) {
    const DesignSpec spec(0.025, 0.80, 1.0, 0.5);
    const int n_int = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(calibrate_gamma(n_int, spec));
    }
}
BENCHMARK(BM_CalibrateGamma)->Arg(4)->Arg(20)->Arg(80);

BENCHMARK_MAIN();
