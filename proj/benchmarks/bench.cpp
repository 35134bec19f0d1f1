#include <benchmark/benchmark.h>

#include "clusterlab/cluster.hpp"
#include "clusterlab/kernels.hpp"
#include "clusterlab/lattice.hpp"
#include "clusterlab/mollifier.hpp"
#include "clusterlab/schatten.hpp"

using namespace clusterlab;

static void BM_EnumerateBand2(benchmark::State& state) {
  const TorusConfig cfg(2);
  const SpectralBand band(static_cast<double>(state.range(0)), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_band(cfg, band));
}
BENCHMARK(BM_EnumerateBand2)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_CountBand3(benchmark::State& state) {
  const TorusConfig cfg(3);
  const SpectralBand band(static_cast<double>(state.range(0)), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(count_band(cfg, band));
}
BENCHMARK(BM_CountBand3)->Arg(50)->Arg(200);

static void BM_DensityLq(benchmark::State& state) {
  auto c = std::make_shared<const SpectralCluster>(
      enumerate_band(TorusConfig(2), SpectralBand(static_cast<double>(state.range(0)), 0.5)));
  const auto rho = density(random_subspace(c, 4, 1));
  for (auto _ : state) benchmark::DoNotOptimize(lp_norm(rho, LpExponent(6.0)));
}
BENCHMARK(BM_DensityLq)->Arg(20)->Arg(80);

static void BM_DensitySup(benchmark::State& state) {
  auto c = std::make_shared<const SpectralCluster>(enumerate_band(TorusConfig(2), SpectralBand(30.0, 0.5)));
  const auto rho = density(random_subspace(c, 4, 1));
  for (auto _ : state) benchmark::DoNotOptimize(lp_norm(rho, LpExponent::infinity()));
}
BENCHMARK(BM_DensitySup);

static void BM_MollifierBuild(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_mollifier());
}
BENCHMARK(BM_MollifierBuild)->Unit(benchmark::kMillisecond);

static void BM_MollifierEval(benchmark::State& state) {
  const auto& m = default_mollifier();
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.a(t));
    t = t > 300.0 ? 0.0 : t + 0.37;
  }
}
BENCHMARK(BM_MollifierEval);

static void BM_DecomposeDiagonal(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        decompose_diagonal(TorusConfig(2), static_cast<double>(state.range(0)), 0.5, default_mollifier()));
  }
}
BENCHMARK(BM_DecomposeDiagonal)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_GramEigenvalues(benchmark::State& state) {
  auto c = std::make_shared<const SpectralCluster>(
      enumerate_band(TorusConfig(2), SpectralBand(static_cast<double>(state.range(0)), 1.0)));
  const auto h = random_test_function(2, 25, 2, 1);
  for (auto _ : state) {
    const GramMatrix g(c, h);
    benchmark::DoNotOptimize(g.eigenvalues());
  }
}
BENCHMARK(BM_GramEigenvalues)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
