#include <benchmark/benchmark.h>

#include "sgjms/integral_kernels.hpp"
#include "sgjms/lane_emden.hpp"
#include "sgjms/quadrature.hpp"
#include "sgjms/rayleigh_optimizer.hpp"

using namespace sgjms;

static void BM_BuildQuadrature(benchmark::State& state) {
  const int Q = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_quadrature(5, Q));
}
BENCHMARK(BM_BuildQuadrature)->Arg(32)->Arg(72)->Arg(264)->Arg(520);

static void BM_SpectralSpace(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(SpectralSpace::make(SphereParams::make(5, 2), K));
}
BENCHMARK(BM_SpectralSpace)->Arg(32)->Arg(128)->Arg(256);

static void BM_FunkHecke(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(funk_hecke_spectrum(SphereParams::make(7, 3), K));
}
BENCHMARK(BM_FunkHecke)->Arg(32)->Arg(128);

static void BM_RayleighGradient(benchmark::State& state) {
  const SpectralSpace sp = SpectralSpace::make(SphereParams::make(3, 1), static_cast<int>(state.range(0)));
  ZonalFunction u = sp.constant(1.0);
  for (int k = 1; k <= sp.degree(); ++k) u.coeffs(k) = 0.1 / k;
  for (auto _ : state) benchmark::DoNotOptimize(rayleigh_gradient(u, 4.0, sp));
}
BENCHMARK(BM_RayleighGradient)->Arg(32)->Arg(128);

static void BM_Minimize(benchmark::State& state) {
  OptimizerConfig cfg;
  cfg.params = SphereParams::make(3, 1);
  cfg.p = 4.0;
  cfg.K = static_cast<int>(state.range(0));
  cfg.starts = 20;
  for (auto _ : state) benchmark::DoNotOptimize(minimize(cfg).value);
}
BENCHMARK(BM_Minimize)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_NewtonBubble(benchmark::State& state) {
  const SphereParams P = SphereParams::make(3, 1);
  const SpectralSpace sp = SpectralSpace::make(P, static_cast<int>(state.range(0)));
  const Nonlinearity f = Nonlinearity::power(5.0);
  ZonalFunction init = sp.constant(1.0);
  for (int k = 1; k <= sp.degree(); ++k) init.coeffs(k) = 0.3 * init.coeffs(0) / (k * k);
  for (auto _ : state) benchmark::DoNotOptimize(solve_newton(sp, f, init).residual);
}
BENCHMARK(BM_NewtonBubble)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_UniquenessProbe(benchmark::State& state) {
  const SpectralSpace sp = SpectralSpace::make(SphereParams::make(5, 2), 32);
  const Nonlinearity f = Nonlinearity::parse("1:1,1:2");
  for (auto _ : state) benchmark::DoNotOptimize(uniqueness_probe(sp, f, 50, 1).matched_constant);
}
BENCHMARK(BM_UniquenessProbe)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
