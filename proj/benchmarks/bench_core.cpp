#include <benchmark/benchmark.h>

#include <Eigen/Core>
#include <cmath>

#include <geoindex/indexform.hpp>
#include <geoindex/jacobi.hpp>
#include <geoindex/profile.hpp>
#include <geoindex/rng.hpp>
#include <geoindex/spectral.hpp>
#include <geoindex/suite.hpp>
#include <geoindex/sym.hpp>

namespace {

using namespace geoindex;

CurvatureProfile sphere_profile(int n) {
    const double c2 = 2.5 * M_PI * 2.5 * M_PI;
    return {n, [n, c2](double) { return SymMatrix(c2 * Eigen::MatrixXd::Identity(n, n)); }};
}

CurvatureProfile bumpy_profile(int n) {
    rng::Rng rng(42);
    return suite::random_profile(rng, n);
}

void BM_solve_jacobi(benchmark::State& state) {
    const CurvatureProfile s = bumpy_profile(2);
    const int steps = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(jacobi::solve_jacobi(s, steps));
}
BENCHMARK(BM_solve_jacobi)->Arg(500)->Arg(2000)->Arg(8000);

void BM_conjugate_points(benchmark::State& state) {
    const auto sol = jacobi::solve_jacobi(bumpy_profile(2), 2000);
    for (auto _ : state) benchmark::DoNotOptimize(jacobi::conjugate_points(sol));
}
BENCHMARK(BM_conjugate_points);

void BM_assemble(benchmark::State& state) {
    const CurvatureProfile s = bumpy_profile(2);
    const indexform::GalerkinBasis basis{2, static_cast<int>(state.range(0)), 4096};
    for (auto _ : state) benchmark::DoNotOptimize(indexform::assemble(s, 1.0, basis));
}
BENCHMARK(BM_assemble)->Arg(32)->Arg(64)->Arg(128);

void BM_galerkin_index(benchmark::State& state) {
    const CurvatureProfile s = bumpy_profile(2);
    const indexform::GalerkinBasis basis{2, static_cast<int>(state.range(0)), 4096};
    for (auto _ : state) benchmark::DoNotOptimize(indexform::galerkin_index(s, 1.0, basis));
}
BENCHMARK(BM_galerkin_index)->Arg(64)->Arg(128);

void BM_find_crossings(benchmark::State& state) {
    const auto path = indexform::assemble_path(sphere_profile(1),
                                               {1, static_cast<int>(state.range(0)), 1024});
    for (auto _ : state) benchmark::DoNotOptimize(spectral::find_crossings(path));
}
BENCHMARK(BM_find_crossings)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_verify_theorem(benchmark::State& state) {
    const CurvatureProfile s = bumpy_profile(static_cast<int>(state.range(0)));
    const indexform::GalerkinBasis basis{static_cast<int>(state.range(0)), 128, 4096};
    for (auto _ : state) benchmark::DoNotOptimize(indexform::verify_theorem(s, basis));
}
BENCHMARK(BM_verify_theorem)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
