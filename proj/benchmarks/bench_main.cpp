#include <benchmark/benchmark.h>

#include <vector>

#include "causalsurv/causal_tree.hpp"
#include "causalsurv/datagen.hpp"
#include "causalsurv/pipeline.hpp"
#include "causalsurv/survival_core.hpp"
#include "causalsurv/survival_forest.hpp"

using namespace causalsurv;

namespace {

std::vector<SurvivalRecord> cohort(const char* scenario, std::size_t n) {
  auto spec = bundled_scenario(scenario, 17);
  spec.n = n;
  return generate(spec).records;
}

void bm_km(benchmark::State& state) {
  const auto recs = cohort("two_group", static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(km_estimate(recs));
  }
}
BENCHMARK(bm_km)->Arg(100)->Arg(1000)->Arg(10000);

void bm_logrank(benchmark::State& state) {
  const auto recs = cohort("two_group", static_cast<std::size_t>(state.range(0)));
  std::vector<SurvivalRecord> a, b;
  for (const auto& r : recs) (r.treatment == 1 ? a : b).push_back(r);
  for (auto _ : state) {
    benchmark::DoNotOptimize(logrank(a, b));
  }
}
BENCHMARK(bm_logrank)->Arg(1000)->Arg(10000);

void bm_forest_fit(benchmark::State& state) {
  const auto recs = cohort("two_group", 500);
  ForestConfig config;
  config.n_trees = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_survival_forest(recs, config, 3, 1));
  }
}
BENCHMARK(bm_forest_fit)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void bm_forest_predict(benchmark::State& state) {
  const auto recs = cohort("two_group", 500);
  ForestConfig config;
  config.n_trees = 100;
  const auto forest = fit_survival_forest(recs, config, 3, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_survival(forest, recs[state.iterations() % recs.size()].covariates));
  }
}
BENCHMARK(bm_forest_predict);

void bm_causal_fit(benchmark::State& state) {
  const auto recs = planted_effect_cohort(static_cast<std::size_t>(state.range(0)), 10.0, 1.0, 8, 5);
  CausalTreeConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_causal_tree(recs, config, 5));
  }
}
BENCHMARK(bm_causal_fit)->Arg(400)->Arg(2000)->Unit(benchmark::kMillisecond);

void bm_pipeline(benchmark::State& state) {
  const auto spec = bundled_scenario("planted", 21);
  const auto recs = generate(spec).records;
  PipelineConfig config;
  config.causal.max_depth = 1;
  config.forest.n_trees = 50;
  config.horizon = 180.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_two_step(recs, config, feature_names(spec), 4));
  }
}
BENCHMARK(bm_pipeline)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
