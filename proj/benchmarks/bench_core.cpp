#include <benchmark/benchmark.h>

#include <cmath>

#include "qrlab/bank.hpp"
#include "qrlab/distance.hpp"
#include "qrlab/fft.hpp"
#include "qrlab/operator.hpp"
#include "qrlab/profile.hpp"
#include "qrlab/spaces.hpp"

using namespace qrlab;

namespace {

GridFunction gaussian(const GridSpec& spec, double sigma) {
  return sample(spec, [sigma](const std::array<double, 3>& x) {
    return cplx(std::exp(-(x[0] * x[0] + x[1] * x[1]) / (2.0 * sigma * sigma)));
  });
}

DistanceFunction euclid() { return builtin_distance(DistanceKind::euclidean, {}); }

}  // namespace

static void BM_FFT2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridSpec spec = make_grid(2, n, 32.0);
  std::vector<cplx> data = gaussian(spec, 2.0).data();
  for (auto _ : state) {
    fft::forward(spec, data);
    fft::inverse(spec, data);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_FFT2D)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);

static void BM_ApplyMultiplier(benchmark::State& state) {
  const GridSpec spec = make_grid(2, static_cast<int>(state.range(0)), 64.0);
  const GridFunction f = gaussian(spec, 4.0);
  const Profile1D h = bump_profile(1.0, 0.45);
  const DistanceFunction rho = euclid();
  for (auto _ : state) benchmark::DoNotOptimize(apply_multiplier(f, rho, h, 0.5));
}
BENCHMARK(BM_ApplyMultiplier)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_MaximalFunction(benchmark::State& state) {
  const GridSpec spec = make_grid(2, 256, 64.0);
  const GridFunction f = gaussian(spec, 4.0);
  const Profile1D h = bump_profile(1.0, 0.45);
  const DistanceFunction rho = euclid();
  const TGrid tg = make_tgrid(-3, -1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(maximal_function(f, rho, h, tg));
  state.SetItemsProcessed(state.iterations() * tg.values().size());
}
BENCHMARK(BM_MaximalFunction)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_LorentzNorm(benchmark::State& state) {
  const GridSpec spec = make_grid(2, static_cast<int>(state.range(0)), 32.0);
  const GridFunction f = gaussian(spec, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(lorentz_norm(f, 1.5, 2.0));
}
BENCHMARK(BM_LorentzNorm)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_HerzNorm(benchmark::State& state) {
  const GridSpec spec = make_grid(2, 512, 64.0);
  const GridFunction f = gaussian(spec, 3.0);
  const AnnulusDecomposition dec = covering_annuli(spec);
  for (auto _ : state) benchmark::DoNotOptimize(herz_norm(f, -0.75, 2.0, dec));
}
BENCHMARK(BM_HerzNorm)->Unit(benchmark::kMillisecond);

static void BM_SquareFunction(benchmark::State& state) {
  const GridSpec spec = make_grid(2, 128, 64.0);
  const GridFunction f = gaussian(spec, 3.0);
  const DistanceFunction rho = euclid();
  for (auto _ : state) benchmark::DoNotOptimize(stein_square_function(f, rho, 0.75));
}
BENCHMARK(BM_SquareFunction)->Unit(benchmark::kMillisecond)->Iterations(1);

static void BM_Kernel1D(benchmark::State& state) {
  const Profile1D h = bump_profile(1.0, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_1d(h, 1.0, 256.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Kernel1D)->Arg(1 << 12)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
