#include <benchmark/benchmark.h>

#include <gaugelab/billiards.hpp>
#include <gaugelab/reconstruct.hpp>

using namespace gaugelab;

namespace {

Domain two_obstacles() {
  DomainSpec s;
  s.obstacles.push_back(Circle{Vec2(0.3, 0.2), 0.2});
  s.obstacles.push_back(Polygon{{Vec2(-0.6, -0.5), Vec2(-0.2, -0.5), Vec2(-0.3, -0.15)}});
  return Domain(s);
}

void BM_TraceFan(benchmark::State& state) {
  const Domain d = two_obstacles();
  const auto rays = fan_rays(d, FanSpec{});
  for (auto _ : state) {
    int traced = 0;
    for (const auto& [start, dir] : rays) {
      try {
        benchmark::DoNotOptimize(trace(d, start, dir).total_length);
        ++traced;
      } catch (const std::exception&) {
      }
    }
    benchmark::DoNotOptimize(traced);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(rays.size()));
}
BENCHMARK(BM_TraceFan);

void BM_VisibilityPath(benchmark::State& state) {
  const Domain d = two_obstacles();
  const VisibilityGraph g(d);
  for (auto _ : state) benchmark::DoNotOptimize(select_path(g, Vec2(1.0, 0.0), Vec2(-0.45, -0.6)).length());
}
BENCHMARK(BM_VisibilityPath);

}  // namespace
