#include <benchmark/benchmark.h>

#include "fraclat/nehari.hpp"
#include "fraclat/random.hpp"
#include "fraclat/semigroup.hpp"
#include "fraclat/spectral.hpp"

using namespace fraclat;

static void BM_KernelTable1d(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernel_table(FractionalOrder(0.5), 1, 64, SpectralConfig{M, 64}, false));
}
BENCHMARK(BM_KernelTable1d)->Arg(1024)->Arg(8192)->Arg(65536);

static void BM_KernelTable2d(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernel_table(FractionalOrder(0.5), 2, 16, SpectralConfig{M, 16}, false));
}
BENCHMARK(BM_KernelTable2d)->Arg(256)->Arg(1024);

static void BM_ApplyKernelTorus(benchmark::State& state) {
  const LatticeGeometry g(2, static_cast<int>(state.range(0)), Boundary::PeriodicWrap);
  const Kernel K = periodic_kernel(FractionalOrder(0.5), g);
  PortableRng rng(1);
  const Field u = random_field(g, rng);
  for (auto _ : state) benchmark::DoNotOptimize(apply_kernel(u, K));
}
BENCHMARK(BM_ApplyKernelTorus)->Arg(8)->Arg(16)->Arg(32);

static void BM_ApplyFftTorus(benchmark::State& state) {
  const LatticeGeometry g(2, static_cast<int>(state.range(0)), Boundary::PeriodicWrap);
  PortableRng rng(1);
  const Field u = random_field(g, rng);
  for (auto _ : state) benchmark::DoNotOptimize(apply_multiplier_fft(u, FractionalOrder(0.5)));
}
BENCHMARK(BM_ApplyFftTorus)->Arg(8)->Arg(16)->Arg(32);

static void BM_Semigroup1d(benchmark::State& state) {
  const LatticeGeometry g(1, static_cast<int>(state.range(0)));
  PortableRng rng(2);
  const Field u = random_field(g, rng);
  const FractionalOrder al(0.5);
  const HeatConfig hc = calibrate_heat_config(al, 1e-6);
  for (auto _ : state) benchmark::DoNotOptimize(fraclap_semigroup(u, al, hc));
}
BENCHMARK(BM_Semigroup1d)->Arg(20)->Arg(80);

static void BM_MinimizeGround(benchmark::State& state) {
  const Model m(LatticeGeometry(1, static_cast<int>(state.range(0)), Boundary::PeriodicWrap), FractionalOrder(0.5),
                Potential::constant(1.0), Nonlinearity::pure_power(4.0));
  const double c[] = {0.0};
  const Field w0 = gaussian_bump(m.geometry(), c, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(minimize(m, w0));
}
BENCHMARK(BM_MinimizeGround)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Multistart(benchmark::State& state) {
  const Model m(LatticeGeometry(1, 64, Boundary::PeriodicWrap), FractionalOrder(0.5), Potential::constant(1.0),
                Nonlinearity::pure_power(4.0));
  MultistartConfig ms{static_cast<int>(state.range(0)), 7};
  for (auto _ : state) benchmark::DoNotOptimize(multistart(m, ms));
}
BENCHMARK(BM_Multistart)->Arg(8)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
