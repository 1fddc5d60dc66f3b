#include <benchmark/benchmark.h>

#include "mabcs/bounds.hpp"
#include "mabcs/cof.hpp"
#include "mabcs/metrics.hpp"
#include "mabcs/runner.hpp"
#include "mabcs/sampler.hpp"

namespace {

using namespace mabcs;

BanditInstance nu2() {
  BanditInstance inst;
  inst.means = {0.44, 0.46, 0.48, 0.7, 0.71, 0.704, 0.714, 0.702, 0.716, 0.708, 0.712, 0.706};
  inst.costs = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  inst.alpha = 0.3;
  return inst;
}

void BM_EnvSample(benchmark::State& state) {
  const auto inst = nu2();
  RewardEnvironment env(inst, 1);
  std::size_t arm = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(env.sample(arm));
    arm = (arm + 1) % inst.num_arms();
  }
}
BENCHMARK(BM_EnvSample);

void BM_ArmStateUpdate(benchmark::State& state) {
  const ConfidenceScheme cs(1e-6);
  ArmState s;
  int r = 0;
  for (auto _ : state) {
    s.update(r ^= 1, cs);
    benchmark::DoNotOptimize(s.ucb);
  }
}
BENCHMARK(BM_ArmStateUpdate);

// Full policy step on a committed COF run: the post-exploration hot loop.
void BM_CofCommittedStep(benchmark::State& state) {
  const auto inst = nu2();
  CofPolicy policy(inst.num_arms(), inst.alpha, CofConfig{1e-10, true, true});
  RewardEnvironment env(inst, 2);
  std::uint64_t t = 0;
  while (!policy.committed() && t < 2000000) {
    const auto arm = policy.next_arm(t);
    policy.observe(arm, env.sample(arm));
    ++t;
  }
  for (auto _ : state) {
    const auto arm = policy.next_arm(t);
    policy.observe(arm, env.sample(arm));
    ++t;
  }
}
BENCHMARK(BM_CofCommittedStep);

// Exploration-phase step including decision passes and queue churn.
void BM_CofEpisodeStep(benchmark::State& state) {
  const auto inst = nu2();
  std::uint64_t t = 0;
  CofPolicy policy(inst.num_arms(), inst.alpha, CofConfig{1e-10, true, true});
  RewardEnvironment env(inst, 3);
  for (auto _ : state) {
    if (policy.committed()) {
      state.PauseTiming();
      policy = CofPolicy(inst.num_arms(), inst.alpha, CofConfig{1e-10, true, true});
      env = RewardEnvironment(inst, 3);
      t = 0;
      state.ResumeTiming();
    }
    const auto arm = policy.next_arm(t);
    policy.observe(arm, env.sample(arm));
    ++t;
  }
}
BENCHMARK(BM_CofEpisodeStep);

void BM_RegretRecord(benchmark::State& state) {
  const auto analysis = analyze(nu2());
  RegretAccumulator acc(analysis, {});
  std::size_t arm = 0;
  for (auto _ : state) {
    acc.record(arm);
    arm = (arm + 1) % analysis.num_arms();
  }
}
BENCHMARK(BM_RegretRecord);

void BM_TauSearch(benchmark::State& state) {
  const auto analysis = analyze(nu2());
  for (auto _ : state) {
    benchmark::DoNotOptimize(tau_search(analysis, 2, 1e-8));
  }
}
BENCHMARK(BM_TauSearch);

void BM_ExactTau(benchmark::State& state) {
  const auto analysis = analyze(nu2());
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_tau(analysis, 0, 1e-4));
  }
}
BENCHMARK(BM_ExactTau);

}  // namespace
