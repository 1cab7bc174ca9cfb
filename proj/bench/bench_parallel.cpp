// SPDX-License-Identifier: Apache-2.0
// Serial reference paths against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "landau/coefficients.hpp"
#include "landau/engine.hpp"
#include "landau/sde.hpp"

using namespace landau;

namespace {

Exec exec_of(benchmark::State const& s)
{
    return s.range(0) ? Exec::parallel : Exec::serial;
}

PotentialSpec spec(int d)
{
    PotentialSpec s;
    s.d = d;
    return s;
}

LandauCoefficients const& lc3()
{
    static LandauCoefficients const lc(spec(3));
    return lc;
}

CoefficientTable const& table3()
{
    static CoefficientTable const t(lc3(), 64, 8.0, true);
    return t;
}

void BM_RunEnsemble(benchmark::State& s)
{
    EngineConfig e;
    e.potential = spec(3);
    e.N = 32;
    e.horizon = 4;
    for (auto _ : s)
        benchmark::DoNotOptimize(run_ensemble(e, Mode::reservoir, 1, 8, exec_of(s)));
}

void BM_FourierMoment(benchmark::State& s)
{
    for (auto _ : s)
        benchmark::DoNotOptimize(fourier_moment(spec(4), CoefficientScheme{}, s.range(0) != 0));
}

void BM_CoefficientTable(benchmark::State& s)
{
    for (auto _ : s)
        benchmark::DoNotOptimize(CoefficientTable(lc3(), 32, 8.0, s.range(0) != 0));
}

void BM_SdeEnsemble(benchmark::State& s)
{
    SdeConfig c;
    c.paths = 2000;
    c.tau_max = 0.5;
    c.dtau = 5e-3;
    table3();
    for (auto _ : s)
        benchmark::DoNotOptimize(run_sde_ensemble(c, table3(), exec_of(s)));
}

}  // namespace

BENCHMARK(BM_RunEnsemble)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FourierMoment)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoefficientTable)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SdeEnsemble)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
