#include <benchmark/benchmark.h>

#include <gaugelab/fields.hpp>
#include <gaugelab/transport.hpp>

using namespace gaugelab;

namespace {

MatrixPotential random_pot(int m) {
  PotentialSpec p;
  p.name = "random_smooth";
  p.m = m;
  p.seed = 3;
  return builtin_potential(p);
}

void BM_TransportPolyline(benchmark::State& state) {
  const auto pot = random_pot(static_cast<int>(state.range(0)));
  const Path path = Path::polyline({Vec2(-0.7, -0.2), Vec2(0.1, 0.6), Vec2(0.6, -0.3)});
  TransportOptions o;
  o.estimate_error = false;
  for (auto _ : state) benchmark::DoNotOptimize(transport(pot, path, o).endpoint);
  state.SetItemsProcessed(state.iterations() * static_cast<long>(std::ceil(path.length() / o.h)));
}
BENCHMARK(BM_TransportPolyline)->Arg(1)->Arg(2)->Arg(4);

void BM_TransportWithRichardson(benchmark::State& state) {
  const auto pot = random_pot(2);
  const Path path = Path::arc(Vec2(0.1, 0.0), 0.6, 0.3, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(transport(pot, path).error_estimate);
}
BENCHMARK(BM_TransportWithRichardson);

void BM_GaugeTransformedSample(benchmark::State& state) {
  const auto pot = random_pot(2);
  GaugeSpec g;
  g.name = "bump";
  g.m = 2;
  g.seed = 4;
  g.radius = 0.9;
  const auto potg = gauge_transform(pot, builtin_gauge(g));
  const Vec2 x(0.2, -0.1);
  for (auto _ : state) benchmark::DoNotOptimize(potg(x));
}
BENCHMARK(BM_GaugeTransformedSample);

}  // namespace
