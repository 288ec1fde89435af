// bench_wft.cpp
//
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <wft/geo_optics.hpp>
#include <wft/harness.hpp>
#include <wft/models.hpp>
#include <wft/scalar_ft.hpp>
#include <wft/system_ft.hpp>
#include <wft/system_riemann.hpp>

#include <benchmark/benchmark.h>

using namespace wft;

namespace {

PiecewiseConstant box(double a, double b, const State& v)
{
    const auto n = static_cast<std::size_t>(v.size());
    std::vector<double> vals(3 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        vals[n + i] = v[static_cast<Eigen::Index>(i)];
    return PiecewiseConstant(n, {a, b}, vals);
}

void BM_RiemannEuler(benchmark::State& st)
{
    auto m = make_model("euler1d");
    const State l = m->background();
    const State r = l + make_state({0.02, 0.01, -0.015});
    const auto opts = wide_riemann_options();
    for (auto _ : st)
        benchmark::DoNotOptimize(riemann_solve(*m, l, r, opts));
}
BENCHMARK(BM_RiemannEuler);

void BM_RiemannPsystem(benchmark::State& st)
{
    auto m = make_model("psystem", {2.0, 1.0});
    const State l = make_state({1.0, 0.0});
    const State r = make_state({1.15, 0.1});
    const auto opts = wide_riemann_options();
    for (auto _ : st)
        benchmark::DoNotOptimize(riemann_solve(*m, l, r, opts));
}
BENCHMARK(BM_RiemannPsystem);

void BM_ScalarEvolve(benchmark::State& st)
{
    const int nu = static_cast<int>(st.range(0));
    const auto init = PiecewiseConstant::scalar({0.0, 1.0}, {0.0, 1.0, 0.0});
    const auto flux = burgers_flux(nu, 1.0);
    for (auto _ : st)
        benchmark::DoNotOptimize(scalar_evolve(init, flux, 64.0));
}
BENCHMARK(BM_ScalarEvolve)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_FtEvolve(benchmark::State& st)
{
    auto m = make_model("euler1d");
    const auto init = add(PiecewiseConstant::constant({1.0, 0.0, 1.0}), box(0.0, 1.0, make_state({0.02, 0.01, 0.02})));
    FtOptions o;
    o.split = 1e-3 * static_cast<double>(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(ft_evolve(*m, init, 4.0, o));
}
BENCHMARK(BM_FtEvolve)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_AssembleExpansion(benchmark::State& st)
{
    auto m = make_model("euler1d");
    const double eps = 0.05;
    const auto u1 = box(0.0, 1.0, make_state({0.1, 0.05, 0.1}));
    const auto prof = evolve_profiles(project_initial(*m, u1, eps, 12), eps * 10.0);
    for (auto _ : st)
        benchmark::DoNotOptimize(assemble_expansion(prof, 10.0));
}
BENCHMARK(BM_AssembleExpansion)->Unit(benchmark::kMicrosecond);

void BM_AssembleAuxiliary(benchmark::State& st)
{
    auto m = make_model("euler1d");
    const double eps = 0.05;
    const auto u1 = box(0.0, 1.0, make_state({0.1, 0.05, 0.1}));
    const auto prof = evolve_profiles(project_initial(*m, u1, eps, 12), eps * 10.0);
    const double t0 = separation_time(prof);
    const auto corr = build_correction_compact(prof, t0);
    for (auto _ : st)
        benchmark::DoNotOptimize(assemble_auxiliary(prof, 10.0, CorrectionKind::Compact, &corr));
}
BENCHMARK(BM_AssembleAuxiliary)->Unit(benchmark::kMicrosecond);

void BM_Godunov(benchmark::State& st)
{
    auto m = make_model("psystem", {2.0, 1.0});
    const auto init = PiecewiseConstant(2, {0.0}, {1.0, 0.0, 1.15, 0.1});
    for (auto _ : st)
        benchmark::DoNotOptimize(godunov_reference(*m, init, 0.25, 1.0 / 100.0));
}
BENCHMARK(BM_Godunov)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
