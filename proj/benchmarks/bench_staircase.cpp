#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "falpha/staircase.hpp"

using namespace falpha;

namespace {
const double kAlpha = std::log(2.0) / std::log(3.0);
}

static void BM_StaircaseEval(benchmark::State& state) {
    auto stair = make_staircase(IfsSpec::middle_third_cantor(), kAlpha, 0.0,
                                int(state.range(0)));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(staircase_eval(stair, u(rng)));
    }
}
BENCHMARK(BM_StaircaseEval)->Arg(16)->Arg(32)->Arg(48);

static void BM_StaircaseBuild(benchmark::State& state) {
    auto spec = IfsSpec::middle_third_cantor();
    for (auto _ : state) {
        benchmark::DoNotOptimize(make_staircase(spec, kAlpha, 0.0, 48));
    }
}
BENCHMARK(BM_StaircaseBuild);

BENCHMARK_MAIN();
