#include <benchmark/benchmark.h>

#include <hetcomp/analysis.hpp>
#include <hetcomp/association.hpp>
#include <hetcomp/channel.hpp>
#include <hetcomp/evaluate.hpp>
#include <hetcomp/overhead.hpp>

namespace {

using namespace hetcomp;

void BM_SampleTrial(benchmark::State& state) {
  auto cfg = reference_hetnet();
  cfg.network.truncation_points_per_tier = static_cast<int>(state.range(0));
  std::uint64_t t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_trial(cfg.network, 1, t++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleTrial)->Arg(50)->Arg(200)->Arg(1000);

// All 2^L cooperation subsets of one realization.
void BM_SubsetSweep(benchmark::State& state) {
  const auto cfg = reference_hetnet();
  const int L = static_cast<int>(state.range(0));
  const auto& tiers = cfg.network.tiers;
  const auto s = sample_trial(cfg.network, 2, 0);
  const auto field = received_field(s.realization, tiers, s.fading.field_gains);
  const auto set = select_coordination_set(s.realization, tiers, L, cfg.network.policy, s.serving_tier);
  const SirEvaluator ev(field, field.power[s.serving_tier][0], tiers, set);
  const std::uint32_t subsets = 1U << L;
  for (auto _ : state) {
    double acc = 0.0;
    for (std::uint32_t m = 0; m < subsets; ++m) acc += ev.sir(PhaseSubset{m});
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * subsets);
}
BENCHMARK(BM_SubsetSweep)->DenseRange(1, 5)->Arg(10);

void BM_EvaluateBatch(benchmark::State& state) {
  const auto cfg = reference_hetnet();
  const auto scenario = configured_scenario(cfg);
  const std::size_t trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_batch(cfg, {&scenario, 1}, {&cfg.throughput, 1}, trials, 3));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvaluateBatch)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_UpperBound1Tier(benchmark::State& state) {
  const auto q = BoundQuery::one_tier(2.0, 8, 2, 2, 0.125);
  SeriesOptions opt;
  opt.analytic_remainder = state.range(0) != 0;
  opt.tolerance = 1e-4;
  opt.max_explicit_terms = 1'000'000;
  for (auto _ : state) benchmark::DoNotOptimize(ub_cdf_1tier(q, 4.0, opt));
}
BENCHMARK(BM_UpperBound1Tier)->Arg(1)->Arg(0);

void BM_UpperBoundKTier(benchmark::State& state) {
  const auto cfg = reference_hetnet();
  BoundQuery q;
  q.threshold = 2.0;
  q.subset_size = 1;
  q.serving_antennas = 8;
  q.num_coordinated = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ub_cdf_ktier(q, cfg.network.tiers, 0));
}
BENCHMARK(BM_UpperBoundKTier);

void BM_TimeFractionLemma1(benchmark::State& state) {
  const auto block = CoherenceModel::deterministic(0.080);
  const auto delay = DelayModel::erlang(static_cast<int>(state.range(0)), 0.020);
  for (auto _ : state) benchmark::DoNotOptimize(time_fraction_lemma1(block, delay));
}
BENCHMARK(BM_TimeFractionLemma1)->Arg(1)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
