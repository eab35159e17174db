#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "falpha/linsolve.hpp"

using namespace falpha;

namespace {

const double kAlpha = std::log(2.0) / std::log(3.0);

Mat random_matrix(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> entry(-2.0, 2.0);
    Mat a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = entry(rng);
    return a;
}

}  // namespace

static void BM_BuildModeBasis(benchmark::State& state) {
    auto stair = make_staircase(IfsSpec::middle_third_cantor(), kAlpha, 0.0);
    std::mt19937_64 rng(42);
    Mat a = random_matrix(std::size_t(state.range(0)), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_mode_basis(a, stair));
    }
}
BENCHMARK(BM_BuildModeBasis)->Arg(2)->Arg(4)->Arg(8);

static void BM_Wronskian(benchmark::State& state) {
    auto stair = make_staircase(IfsSpec::middle_third_cantor(), kAlpha, 0.0);
    std::mt19937_64 rng(42);
    Mat a = random_matrix(6, rng);
    auto basis = build_mode_basis(a, stair);
    double t = 2.0 / 3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wronskian(basis, t));
        t = (t == 2.0 / 3.0) ? 1.0 / 9.0 : 2.0 / 3.0;
    }
}
BENCHMARK(BM_Wronskian);

static void BM_CharacteristicPolynomial(benchmark::State& state) {
    std::mt19937_64 rng(7);
    Mat a = random_matrix(std::size_t(state.range(0)), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(characteristic_polynomial(a));
    }
}
BENCHMARK(BM_CharacteristicPolynomial)->Arg(4)->Arg(8)->Arg(12);

BENCHMARK_MAIN();
