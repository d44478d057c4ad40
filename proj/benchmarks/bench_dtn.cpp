#include <benchmark/benchmark.h>

#include <gaugelab/dtn.hpp>

using namespace gaugelab;

namespace {

// one factorization plus n_b * m solves
void BM_DtnDisk(benchmark::State& state) {
  const Domain d{DomainSpec{}};
  PotentialSpec p;
  p.name = "bump";
  p.m = static_cast<int>(state.range(1));
  p.seed = 7;
  const auto pot = builtin_potential(p);
  SolverOptions o;
  o.h_grid = 1.0 / static_cast<double>(state.range(0));
  o.estimate_condition = false;
  for (auto _ : state) benchmark::DoNotOptimize(dtn_matrix(d, pot, {2.0, 0.0}, 9, o).entries);
}
BENCHMARK(BM_DtnDisk)->Args({32, 1})->Args({64, 1})->Args({64, 2})->Unit(benchmark::kMillisecond);

void BM_SolverGrid(benchmark::State& state) {
  DomainSpec s;
  s.obstacles.push_back(Circle{Vec2(0.4, 0.0), 0.15});
  const Domain d(s);
  for (auto _ : state) benchmark::DoNotOptimize(SolverGrid(d, 1.0 / static_cast<double>(state.range(0))).nx());
}
BENCHMARK(BM_SolverGrid)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
