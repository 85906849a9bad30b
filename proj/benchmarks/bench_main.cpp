#include <benchmark/benchmark.h>

#include "k3density/report.hpp"

using namespace k3density;

static void BM_CharPoly3x3(benchmark::State& state) {
    IntMatrix m{{32, 8, 13}, {-24, -5, -9}, {-7, -2, -3}};
    for (auto _ : state) benchmark::DoNotOptimize(char_poly(m));
}
BENCHMARK(BM_CharPoly3x3);

static void BM_FundamentalUnit(benchmark::State& state) {
    Int D = Int(state.range(0)) * Int(state.range(0)) - 16;
    for (auto _ : state) benchmark::DoNotOptimize(fundamental_unit(D));
}
BENCHMARK(BM_FundamentalUnit)->Arg(7)->Arg(55)->Arg(195)->Arg(4001);

static void BM_SolutionClasses(benchmark::State& state) {
    Int D = Int(state.range(0)) * Int(state.range(0)) - 16;
    PellProblem p(D, Int(-8));
    for (auto _ : state) benchmark::DoNotOptimize(solution_classes(p));
}
BENCHMARK(BM_SolutionClasses)->Arg(7)->Arg(23)->Arg(55)->Arg(195);

static void BM_SpectralRadius(benchmark::State& state) {
    IntPolynomial p = IntPolynomial({-1, 1}) * IntPolynomial({1, -23, 1});
    Rat width = make_rat(1, 1000000);
    for (auto _ : state) benchmark::DoNotOptimize(spectral_radius_bounds(p, width));
}
BENCHMARK(BM_SpectralRadius);

static void BM_FibrationObstruction(benchmark::State& state) {
    Hilb2Lattice lat(Int(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(abelian_fibration_obstruction(lat, Int(state.range(1))));
}
BENCHMARK(BM_FibrationObstruction)->Args({7, 50})->Args({7, 200})->Args({13, 200});

static void BM_Verify(benchmark::State& state) {
    Int a(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(density_verdict(a));
}
BENCHMARK(BM_Verify)->Arg(7)->Arg(13)->Arg(55);

static void BM_Scan(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(scan(Int(5), Int(state.range(0))));
}
BENCHMARK(BM_Scan)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
