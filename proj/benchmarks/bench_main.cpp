#include <benchmark/benchmark.h>

#include "sharesim/estimators.hpp"
#include "sharesim/experiment.hpp"
#include "sharesim/oracle.hpp"
#include "sharesim/simulator.hpp"

namespace {

using namespace sharesim;

SharingMdpConfig bench_config() {
  SharingMdpConfig config;
  config.policy.probs = {0.5, 0.25, 0.25};
  config.gammas = {0.1, 0.2, 0.3};
  return config;
}

void SampleDataset(benchmark::State& state) {
  const SharingMdpConfig config = bench_config();
  const auto n = static_cast<std::int64_t>(state.range(0));
  std::uint64_t seed = 0;
  std::int64_t sessions = 0;
  for (auto _ : state) {
    const Dataset d = sample_dataset(config, SamplingPolicy::production(), {},
                                     SimulationSeed{seed++, 0}, n);
    sessions += d.session_count();
    benchmark::DoNotOptimize(d);
  }
  state.SetItemsProcessed(sessions);
}
BENCHMARK(SampleDataset)->Arg(10'000)->Arg(100'000);

void EstimateGamma(benchmark::State& state) {
  const SharingMdpConfig config = bench_config();
  const Dataset d = sample_dataset(config, SamplingPolicy::production(), {},
                                   SimulationSeed{7, 0}, state.range(0));
  for (auto _ : state) {
    const GammaEstimate g = estimate_gamma(d);
    benchmark::DoNotOptimize(g);
  }
  state.SetItemsProcessed(state.iterations() * d.session_count());
}
BENCHMARK(EstimateGamma)->Arg(10'000)->Arg(100'000);

void PairwiseAtes(benchmark::State& state) {
  const SharingMdpConfig config = bench_config();
  const Dataset d = sample_dataset(config, SamplingPolicy::production(), {},
                                   SimulationSeed{7, 0}, 100'000);
  const auto kind = static_cast<EstimatorKind>(state.range(0));
  for (auto _ : state) {
    const AteMatrix m = pairwise_ates(d, kind);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(PairwiseAtes)
    ->Arg(static_cast<int>(EstimatorKind::kNaive))
    ->Arg(static_cast<int>(EstimatorKind::kDiffInQs))
    ->Arg(static_cast<int>(EstimatorKind::kDiffInGeometrics));

void SmallSweep(benchmark::State& state) {
  SweepPlan plan;
  plan.config = bench_config();
  plan.sample_sizes = {100, 1000};
  plan.repetitions = 8;
  plan.base_seed = SimulationSeed{11, 0};
  for (auto _ : state) {
    const SweepResult r = run_sweep(plan, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(SmallSweep)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
