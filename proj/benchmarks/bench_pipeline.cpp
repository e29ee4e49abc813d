#include <benchmark/benchmark.h>

#include <vector>

#include "phasetopo/diagram_metrics.hpp"
#include "phasetopo/dynamics.hpp"
#include "phasetopo/embedding.hpp"
#include "phasetopo/filtration.hpp"
#include "phasetopo/homology.hpp"
#include "phasetopo/random.hpp"

using namespace phasetopo;

namespace {

PointCloud lorenz_cloud(std::size_t points) {
  OdeSpec spec = OdeSpec::lorenz();
  spec.n_steps = 6000;
  const Trajectory traj = integrate(spec);
  EmbeddingConfig cfg;
  cfg.tau = 10;
  cfg.max_points = static_cast<int>(points);
  return subsample(delay_embed(traj.x, cfg), points);
}

PersistenceDiagram noisy_diagram(Rng& rng, std::size_t n) {
  PersistenceDiagram d;
  d.eps_max = 20.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = rng.uniform(0.0, 10.0);
    d.pairs.push_back({1, b, b + rng.uniform(0.0, 10.0)});
  }
  return d;
}

}  // namespace

static void BM_BuildRips(benchmark::State& state) {
  const PointCloud cloud = lorenz_cloud(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_rips(cloud, {}));
  }
}
BENCHMARK(BM_BuildRips)->Arg(50)->Arg(100)->Arg(150)->Unit(benchmark::kMillisecond);

static void BM_Persistence(benchmark::State& state) {
  const Filtration f = build_rips(lorenz_cloud(static_cast<std::size_t>(state.range(0))), {});
  const auto strategy = state.range(1) == 0 ? Reduction::Coboundary : Reduction::Boundary;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_persistence(f, strategy));
  }
  state.counters["simplices"] = static_cast<double>(f.simplices.size());
}
BENCHMARK(BM_Persistence)
    ->ArgsProduct({{50, 100, 150}, {0, 1}})
    ->ArgNames({"points", "boundary"})
    ->Unit(benchmark::kMillisecond);

static void BM_Wasserstein(benchmark::State& state) {
  Rng rng(3);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const PersistenceDiagram x = noisy_diagram(rng, n);
  const PersistenceDiagram y = noisy_diagram(rng, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wasserstein1(x, y));
  }
}
BENCHMARK(BM_Wasserstein)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMicrosecond);

static void BM_Bottleneck(benchmark::State& state) {
  Rng rng(4);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const PersistenceDiagram x = noisy_diagram(rng, n);
  const PersistenceDiagram y = noisy_diagram(rng, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bottleneck(x, y));
  }
}
BENCHMARK(BM_Bottleneck)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
