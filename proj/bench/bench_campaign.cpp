#include <benchmark/benchmark.h>

#include "floatlink/harness.hpp"

using namespace floatlink;

namespace {

ExperimentConfig short_plans()
{
  ExperimentConfig c;
  c.random.min_segments = 2;
  c.random.max_segments = 2;
  c.random.min_length   = 5.0;
  c.random.max_length   = 8.0;
  c.random.settle_time  = 2.0;
  c.metrics_skip        = 1.0;
  return c;
}

void BM_CampaignSerial(benchmark::State & state)
{
  const ExperimentConfig base = short_plans();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_campaign_serial(base, static_cast<int>(state.range(0)), 1));
  }
  state.SetItemsProcessed(state.iterations() * 2 * state.range(0));
}

void BM_CampaignParallel(benchmark::State & state)
{
  const ExperimentConfig base = short_plans();
  for (auto _ : state) { benchmark::DoNotOptimize(run_campaign(base, static_cast<int>(state.range(0)), 1)); }
  state.SetItemsProcessed(state.iterations() * 2 * state.range(0));
}

}  // namespace

BENCHMARK(BM_CampaignSerial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CampaignParallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
