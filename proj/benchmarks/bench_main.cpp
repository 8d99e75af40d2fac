#include <benchmark/benchmark.h>

#include "nsmab/engine.hpp"
#include "nsmab/environment.hpp"
#include "nsmab/policies.hpp"
#include "nsmab/weights.hpp"

using namespace nsmab;

namespace {

std::vector<ArmHistory> histories_with(int arms, long pulls) {
  RandomStream rng(1);
  std::vector<ArmHistory> out;
  for (int i = 0; i < arms; ++i) {
    ArmHistory h(i);
    for (long s = 1; s <= pulls; ++s) h.add(s, rng.uniform01());
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace

static void BM_WeightedUcbSelect(benchmark::State& state) {
  const int arms = static_cast<int>(state.range(0));
  const long pulls = state.range(1);
  auto histories = histories_with(arms, pulls);
  WeightedUcbPolicy policy(
      0.0, std::vector<WeightScheme>(static_cast<std::size_t>(arms), WeightScheme::uniform()));
  long round = arms * pulls + 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(policy.select(round, histories));
  }
  state.SetItemsProcessed(state.iterations() * arms);
}
BENCHMARK(BM_WeightedUcbSelect)->Args({10, 100})->Args({150, 33})->Args({150, 500});

static void BM_EnvPull(benchmark::State& state) {
  Environment env = make_rotting(static_cast<int>(state.range(0)), TrialSeed{5, 0});
  int arm = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(env.pull(arm));
    arm = (arm + 1) % env.num_arms();
  }
}
BENCHMARK(BM_EnvPull)->Arg(10)->Arg(150);

static void BM_Exp3Round(benchmark::State& state) {
  const int arms = static_cast<int>(state.range(0));
  Exp3Policy policy(arms, 0.002, 0.3, {0.0, 1.0}, RandomStream(2));
  std::vector<ArmHistory> unused;
  long t = 1;
  for (auto _ : state) {
    const int arm = policy.select(t, unused);
    policy.observe(arm, 0.5);
    ++t;
  }
}
BENCHMARK(BM_Exp3Round)->Arg(150);

static void BM_RunTrial(benchmark::State& state) {
  EnvironmentSpec env;
  env.family = Family::kIid;
  env.num_arms = static_cast<int>(state.range(0));
  env.horizon = state.range(1);
  PolicySpec policy;
  policy.kind = PolicyKind::kWeightedUcb;
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trial(env, policy, env.horizon, 7, trial++));
  }
}
BENCHMARK(BM_RunTrial)->Args({10, 1000})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
