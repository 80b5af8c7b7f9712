#include <benchmark/benchmark.h>

#include <amo/nonhermitian.hpp>
#include <amo/operator_model.hpp>
#include <amo/potential.hpp>
#include <amo/spectra.hpp>
#include <amo/transfer.hpp>

using namespace amo;

static void BM_DiscriminantScaled(benchmark::State& state) {
    Rational a(34, static_cast<std::int64_t>(state.range(0)));
    for (auto _ : state) {
        auto s = discriminant_scaled(0.37, a, 2.0, 0.45);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_DiscriminantScaled)->Arg(55)->Arg(233)->Arg(987);

static void BM_BandsUnionTheta(benchmark::State& state) {
    Rational a(34, static_cast<std::int64_t>(state.range(0)));
    for (auto _ : state) {
        auto b = bands_union_theta(a, 2.0);
        benchmark::DoNotOptimize(b);
    }
}
BENCHMARK(BM_BandsUnionTheta)->Arg(21)->Arg(55);

static void BM_IdsMeasure(benchmark::State& state) {
    int M = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto mu = ids_measure(Rational(13, 21), 2.0, M);
        benchmark::DoNotOptimize(mu);
    }
}
BENCHMARK(BM_IdsMeasure)->Arg(128)->Arg(512)->Arg(2000);

static void BM_SturmEigenvalues(benchmark::State& state) {
    int N = static_cast<int>(state.range(0));
    AmoParams p{Alpha(Rational(5, 8)), 1.5, 0.3};
    auto op = truncation_matrix(p, N);
    for (auto _ : state) {
        auto e = sturm_eigenvalues(op, 1e-10);
        benchmark::DoNotOptimize(e);
    }
}
BENCHMARK(BM_SturmEigenvalues)->Arg(160)->Arg(640);

static void BM_PolyRoots(benchmark::State& state) {
    auto disc = discriminant_poly(Rational(8, 13), 1.5, 0.4, Perturbation(1.5));
    CPoly c = disc.coeffs;
    c[0] -= 1.2;
    for (auto _ : state) {
        auto r = poly_roots(c);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_PolyRoots);

static void BM_EquilibriumMeasure(benchmark::State& state) {
    BandSet iv;
    iv.bands.push_back({-2.0, 2.0});
    int M = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto mu = equilibrium_measure(iv, M, 200);
        benchmark::DoNotOptimize(mu);
    }
}
BENCHMARK(BM_EquilibriumMeasure)->Arg(64)->Arg(256);

static void BM_LyapunovFinite(benchmark::State& state) {
    AmoParams p{Alpha(preset_alpha("golden")), 1.5, 0.0};
    Perturbation id;
    for (auto _ : state) {
        double l = lyapunov_finite({3.0, 1.0}, p, id, state.range(0));
        benchmark::DoNotOptimize(l);
    }
}
BENCHMARK(BM_LyapunovFinite)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
