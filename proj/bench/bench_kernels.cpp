#include <benchmark/benchmark.h>
#include <cmath>

#include "bvlab/constructions.hpp"
#include "bvlab/dynamics.hpp"
#include "bvlab/kernels.hpp"
#include "bvlab/order2.hpp"

using namespace bvlab;

namespace {

const ExteriorLaurent& shell20() {
  static const auto g = shell_beurling(ShellParams::optimal(20, 14));
  return g;
}

std::vector<Radius> radii(int n) {
  std::vector<Radius> out;
  for (int i = 0; i < n; ++i) out.push_back(Radius::from_log(std::log1p(std::pow(10.0, -1.0 - 8.0 * i / n))));
  return out;
}

void BM_means_parallel(benchmark::State& st) {
  const auto rs = radii(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(integral_means_grid(shell20(), rs));
}

void BM_means_serial(benchmark::State& st) {
  const auto rs = radii(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(integral_means_grid_serial(shell20(), rs));
}

void BM_bloch_parallel(benchmark::State& st) {
  const auto rs = radii(64);
  for (auto _ : st) benchmark::DoNotOptimize(bloch_sup_grid(shell20(), rs, static_cast<int>(st.range(0))));
}

void BM_bloch_serial(benchmark::State& st) {
  const auto rs = radii(64);
  for (auto _ : st) benchmark::DoNotOptimize(bloch_sup_grid_serial(shell20(), rs, static_cast<int>(st.range(0))));
}

CirclePotential re_z() {
  CirclePotential phi;
  phi.coeffs[1] = 0.5;
  phi.coeffs[-1] = 0.5;
  return phi;
}

void BM_birkhoff_mc(benchmark::State& st) {
  const BlaschkeMap B{3, {0.3, {0.1, 0.2}}};
  const bool parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(birkhoff_variance_mc(re_z(), B, 20, 100000, 7, parallel));
}

void BM_search(benchmark::State& st) {
  SearchGrid grid;
  grid.d = {3, 8, 16, 20};
  grid.rho0 = {std::nullopt, 0.05};
  grid.n0 = {std::nullopt, std::int64_t{4}};
  const bool parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(parameter_search(grid, parallel));
}

}  // namespace

BENCHMARK(BM_means_parallel)->Arg(256)->Arg(4096);
BENCHMARK(BM_means_serial)->Arg(256)->Arg(4096);
BENCHMARK(BM_bloch_parallel)->Arg(256)->Arg(1024);
BENCHMARK(BM_bloch_serial)->Arg(256)->Arg(1024);
BENCHMARK(BM_birkhoff_mc)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_search)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
