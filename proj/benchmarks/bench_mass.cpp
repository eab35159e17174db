#include <benchmark/benchmark.h>

#include <cmath>

#include "falpha/mass.hpp"

using namespace falpha;

namespace {
const double kAlpha = std::log(2.0) / std::log(3.0);
}

static void BM_MassRefinement(benchmark::State& state) {
    auto spec = IfsSpec::middle_third_cantor();
    double alpha = double(state.range(0)) / 100.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mass(spec, alpha, 0.0, 1.0, 1e-9));
    }
}
BENCHMARK(BM_MassRefinement)->Arg(63)->Arg(90);

static void BM_AlignedSumClipped(benchmark::State& state) {
    auto spec = IfsSpec::middle_third_cantor();
    for (auto _ : state) {
        benchmark::DoNotOptimize(detail::aligned_sum(spec, int(state.range(0)), kAlpha,
                                                     0.21, 0.83));
    }
}
BENCHMARK(BM_AlignedSumClipped)->Arg(16)->Arg(32)->Arg(48);

static void BM_GammaDimension(benchmark::State& state) {
    auto spec = IfsSpec::middle_third_cantor();
    for (auto _ : state) {
        benchmark::DoNotOptimize(gamma_dimension(spec, 0.0, 1.0, 1e-4));
    }
}
BENCHMARK(BM_GammaDimension);

BENCHMARK_MAIN();
