#include <benchmark/benchmark.h>

#include "resurge/alien.hpp"
#include "resurge/borel.hpp"
#include "resurge/numeric.hpp"
#include "resurge/resummation.hpp"
#include "resurge/solvers.hpp"
#include "resurge/stokes.hpp"

using namespace resurge;

namespace {

FormalSeries inverse_square(int N)
{
    return FormalSeries(Variable::z, 2, FormalSeries::ExactCoeffs{CQ(Rational(1))}, N);
}

void BM_HenonExact(benchmark::State& state)
{
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_henon(N));
    state.SetComplexityN(N);
}
BENCHMARK(BM_HenonExact)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond)->Complexity();

void BM_HenonFloat(benchmark::State& state)
{
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_henon_float(N, 256));
}
BENCHMARK(BM_HenonFloat)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_FormalIntegral(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(formal_integral(static_cast<int>(state.range(0)), 40));
}
BENCHMARK(BM_FormalIntegral)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_LinearFirst(benchmark::State& state)
{
    const FormalSeries a = inverse_square(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_linear_first(a));
}
BENCHMARK(BM_LinearFirst)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_LaplaceSum(benchmark::State& state)
{
    PrecisionScope scope(128);
    const LinearSolution lin = solve_linear_first(inverse_square(40));
    EvalPlan plan;
    plan.bits = 128;
    plan.tol = 1e-25;
    const CF z(Real(10), Real(2));
    for (auto _ : state)
        benchmark::DoNotOptimize(laplace_sum(lin.borel, plan, z));
}
BENCHMARK(BM_LaplaceSum)->Unit(benchmark::kMillisecond);

void BM_Pade(benchmark::State& state)
{
    const LinearSolution lin = solve_linear_first(inverse_square(40));
    const int L = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(pade_continue(lin.borel.minor, L, L, 128));
}
BENCHMARK(BM_Pade)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_LinearStokes(benchmark::State& state)
{
    const FormalSeries a = inverse_square(40);
    for (auto _ : state)
        benchmark::DoNotOptimize(linear_stokes(a, 5));
}
BENCHMARK(BM_LinearStokes)->Unit(benchmark::kMillisecond);

void BM_DeltaIdentity(benchmark::State& state)
{
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_delta_identity(m));
}
BENCHMARK(BM_DeltaIdentity)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

void BM_ExpLog(benchmark::State& state)
{
    const int M = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_exp_log(M));
}
BENCHMARK(BM_ExpLog)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_GammaHat(benchmark::State& state)
{
    PrecisionScope scope(128);
    const CF xi(Real(0.5), Real(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(gamma_hat(xi, 60));
}
BENCHMARK(BM_GammaHat)->Unit(benchmark::kMicrosecond);

void BM_HornMap(benchmark::State& state)
{
    PrecisionScope scope(256);
    const GermSpec g(inverse_square(60));
    HornMapOptions opt;
    opt.samples = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(horn_map_coeffs(g, 2.0, 1, opt));
}
BENCHMARK(BM_HornMap)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
BENCHMARK_MAIN();
