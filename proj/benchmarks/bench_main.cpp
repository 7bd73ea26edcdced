#include <benchmark/benchmark.h>

#include "sqglab/generators.hpp"
#include "sqglab/integrator.hpp"
#include "sqglab/nonlinear.hpp"

using namespace sqglab;

namespace {

void BM_RoundTrip(benchmark::State& state) {
  const auto grid = Grid::make(static_cast<int>(state.range(0)));
  const auto theta = random_field(grid, 1, grid->cutoff());
  for (auto _ : state) {
    auto back = SpectralField::from_physical(theta.to_physical());
    benchmark::DoNotOptimize(back);
  }
}
BENCHMARK(BM_RoundTrip)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_SqgTransport(benchmark::State& state) {
  const auto grid = Grid::make(static_cast<int>(state.range(0)));
  const auto theta = random_field(grid, 2, grid->cutoff(), -1.5);
  for (auto _ : state) benchmark::DoNotOptimize(sqg_transport(theta));
}
BENCHMARK(BM_SqgTransport)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_SqgStep(benchmark::State& state) {
  const auto grid = Grid::make(static_cast<int>(state.range(0)));
  SolverConfig c;
  c.equation = Equation::SQG;
  c.grid = grid;
  c.nu = 1e-3;
  c.gamma = 1.0;
  c.dt = 1e-2;
  c.scalar_forcing = default_sqg_forcing(grid, 3);
  SqgState s(random_field(grid, 4, 8.0, -1.5));
  for (auto _ : state) {
    s = step_sqg(s, c);
    benchmark::DoNotOptimize(s.field);
  }
}
BENCHMARK(BM_SqgStep)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_NseStep(benchmark::State& state) {
  const auto grid = Grid::make(static_cast<int>(state.range(0)));
  SolverConfig c;
  c.equation = Equation::NSE;
  c.grid = grid;
  c.nu = 1e-3;
  c.dt = 1e-2;
  c.velocity_forcing = kolmogorov_force(grid, {1, 2}).f;
  NseState s(random_velocity(grid, 5, 8.0));
  for (auto _ : state) {
    s = step_nse(s, c);
    benchmark::DoNotOptimize(s.field);
  }
}
BENCHMARK(BM_NseStep)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
