// Serial reference kernels against their OpenMP counterparts.
//
//   bench_kernels --benchmark_filter=TrainingSet

#include <benchmark/benchmark.h>

#include <vector>

#include "fracwos/estimator.hpp"
#include "fracwos/evaluate.hpp"
#include "fracwos/nn.hpp"
#include "fracwos/parallel.hpp"
#include "fracwos/problems.hpp"

namespace {

using fwos::FractionalParams;

struct PointSetup {
  FractionalParams p{2, 1.5};
  fwos::ProblemSpec prob = fwos::example1(p);
  fwos::EstimatorConfig cfg = [] {
    fwos::EstimatorConfig c;
    c.paths = 2000;
    return c;
  }();
  fwos::EstimatorContext ctx{prob, p, cfg};
  std::vector<double> x{0.4, -0.3};
};

void BM_PointEstimateSerial(benchmark::State& state) {
  PointSetup s;
  for (auto _ : state) benchmark::DoNotOptimize(fwos::estimate_u_stats_serial(s.x, s.ctx, 1, 0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.cfg.paths));
}

void BM_PointEstimateParallel(benchmark::State& state) {
  PointSetup s;
  for (auto _ : state) benchmark::DoNotOptimize(fwos::estimate_u_stats(s.x, s.ctx, 1, 0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.cfg.paths));
  state.counters["threads"] = fwos::max_threads();
}

template <bool Parallel>
void BM_TrainingSet(benchmark::State& state) {
  const FractionalParams p(2, 1.0);
  const auto prob = fwos::example1(p);
  fwos::EstimatorConfig cfg;
  cfg.paths = 100;
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(fwos::generate_training_set(prob, p, count, cfg, 1.5, 1));
    } else {
      benchmark::DoNotOptimize(fwos::generate_training_set_serial(prob, p, count, cfg, 1.5, 1));
    }
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = Parallel ? fwos::max_threads() : 1;
}

template <bool Parallel>
void BM_Evaluate(benchmark::State& state) {
  const FractionalParams p(2, 1.0);
  const auto prob = fwos::example1(p);
  fwos::RngStream rng(1, fwos::nn::kInitStream);
  const auto model = fwos::nn::init_mlp(2, rng);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(fwos::evaluate_model(model, prob, n, 1.0, 1));
    } else {
      benchmark::DoNotOptimize(fwos::evaluate_model_serial(model, prob, n, 1.0, 1));
    }
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = Parallel ? fwos::max_threads() : 1;
}

}  // namespace

BENCHMARK(BM_PointEstimateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PointEstimateParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TrainingSet<false>)->Name("BM_TrainingSetSerial")->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainingSet<true>)->Name("BM_TrainingSetParallel")->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Evaluate<false>)->Name("BM_EvaluateSerial")->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Evaluate<true>)->Name("BM_EvaluateParallel")->Arg(5000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
