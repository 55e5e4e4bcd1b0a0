#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "hvqm/evolution.hpp"
#include "hvqm/hidden_density.hpp"
#include "hvqm/rng.hpp"
#include "hvqm/stats.hpp"
#include "hvqm/von_neumann.hpp"

using namespace hvqm;

static void BM_SampleLambda(benchmark::State& state) {
  const auto P = symmetrize(make_lognormal({1.0, 0.3}));
  SeedStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(P.sample(rng));
  }
}
BENCHMARK(BM_SampleLambda);

static void BM_SimulateEvents(benchmark::State& state) {
  const auto P = symmetrize(make_lognormal({1.0, 0.3}));
  const auto s = SpectralState(
      {{1.0, {0.5, 0.0}}, {2.0, {std::sqrt(0.75), 0.0}}});
  MeasurementConfig config{1.0, 1.0, 1.0,
                           static_cast<std::uint64_t>(state.range(0)), 7, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_events(s, config, P));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateEvents)->Arg(1 << 10)->Arg(1 << 14);

static void BM_MomentQuadrature(benchmark::State& state) {
  const auto d = make_lognormal({1.0, 0.3});
  for (auto _ : state) {
    auto r = stats::integrate_log_halfline(
        [&](double lam) { return lam * d.pdf(lam); }, 0.0, 0.3, 1e-12);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_MomentQuadrature);

static void BM_EvolveFree(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto grid = make_gaussian_grid(-32.0, 32.0, n, 0.0, 1.0, 1.5);
  const double dt = default_dt_free(grid, 1.2, 1.0);
  const long steps = static_cast<long>(std::ceil(1.5 / dt));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_free(grid, 1.2, 1.0, dt, steps));
  }
}
BENCHMARK(BM_EvolveFree)->Arg(1 << 10)->Arg(1 << 12)->Arg(1 << 14);

static void BM_KsTest(benchmark::State& state) {
  const auto d = make_lognormal({1.0, 0.3});
  SeedStream rng(3);
  std::vector<double> samples(100000);
  for (auto& x : samples) x = d.sample_magnitude(rng);
  for (auto _ : state) {
    auto r = stats::ks_test(
        samples, [&](double x) { return d.cdf(x); }, 0.01);
    benchmark::DoNotOptimize(r.d_statistic);
  }
}
BENCHMARK(BM_KsTest);

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
