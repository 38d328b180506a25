#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <vector>

#include "choicestat/bootstrap.hpp"
#include "choicestat/estimation.hpp"
#include "choicestat/model.hpp"
#include "support/fixtures.hpp"

using namespace choicestat;
using namespace fixtures;

namespace {

Dataset sample(std::size_t persons) {
  return simulate_dataset(three_mode_spec(), three_mode_truth(), three_mode_design(0.8), persons, 1, 1).data;
}

void BM_LogLikelihood(benchmark::State& state) {
  const Dataset d = sample(static_cast<std::size_t>(state.range(0)));
  const SampleLikelihood ll(d, three_mode_spec());
  const Eigen::VectorXd b = three_mode_truth();
  for (auto _ : state) benchmark::DoNotOptimize(ll.log_likelihood(b).value);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogLikelihood)->Arg(1000)->Arg(10000);

void BM_Hessian(benchmark::State& state) {
  const Dataset d = sample(static_cast<std::size_t>(state.range(0)));
  const SampleLikelihood ll(d, three_mode_spec());
  const Eigen::VectorXd b = three_mode_truth();
  for (auto _ : state) benchmark::DoNotOptimize(ll.hessian(b).sum());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Hessian)->Arg(1000)->Arg(10000);

void BM_Estimate(benchmark::State& state) {
  const Dataset d = sample(static_cast<std::size_t>(state.range(0)));
  const SampleLikelihood ll(d, three_mode_spec());
  for (auto _ : state) benchmark::DoNotOptimize(estimate(ll, Eigen::VectorXd::Zero(5), {}).ll_hat);
}
BENCHMARK(BM_Estimate)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_HpdInterval(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::lognormal_distribution<double> ln(0.0, 1.0);
  std::vector<double> draws(static_cast<std::size_t>(state.range(0)));
  for (auto& x : draws) x = ln(rng);
  for (auto _ : state) benchmark::DoNotOptimize(hpd_interval(draws, 0.95, 1.0).width());
}
BENCHMARK(BM_HpdInterval)->Arg(400)->Arg(1000000)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
