#include <benchmark/benchmark.h>

#include "risklab/envs.hpp"
#include "risklab/learner.hpp"
#include "risklab/planner.hpp"
#include "risklab/rng.hpp"

using namespace risklab;

namespace {

DiscreteDistribution dense_distribution(int n) {
    std::vector<double> grid, mass;
    rng::Stream rng(7);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        grid.push_back(static_cast<double>(i) * 0.125);
        double w = rng.uniform() + 1e-3;
        mass.push_back(w);
        total += w;
    }
    for (double& m : mass) m /= total;
    return DiscreteDistribution(std::move(grid), std::move(mass));
}

const FrozenLake& lake() {
    static FrozenLake l = make_frozen_lake(FrozenLakeSpec::default_spec());
    return l;
}

}  // namespace

static void BM_PhiQuantile(benchmark::State& state) {
    DiscreteDistribution d = dense_distribution(static_cast<int>(state.range(0)));
    WeightingFunction g = WeightingFunction::cvar(0.25);
    for (auto _ : state) benchmark::DoNotOptimize(phi_quantile(d, g));
}
BENCHMARK(BM_PhiQuantile)->Arg(16)->Arg(256);

static void BM_PhiCdf(benchmark::State& state) {
    DiscreteDistribution d = dense_distribution(static_cast<int>(state.range(0)));
    WeightingFunction g = WeightingFunction::cvar(0.25);
    for (auto _ : state) benchmark::DoNotOptimize(phi_cdf(d, g));
}
BENCHMARK(BM_PhiCdf)->Arg(16)->Arg(256);

static void BM_EvaluatePolicyDistribution(benchmark::State& state) {
    AugmentedMdp aug = build_augmented(lake().mdp, lake().mdp.eta);
    AugmentedPolicy pi =
        AugmentedPolicy::constant(lake().mdp.horizon, lake().mdp.n_states, aug.y_levels, lake().mdp.n_actions, kDown);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_policy_distribution(aug, pi));
}
BENCHMARK(BM_EvaluatePolicyDistribution);

static void BM_PlanCvar(benchmark::State& state) {
    AugmentedMdp aug = build_augmented(lake().mdp, lake().mdp.eta);
    for (auto _ : state) benchmark::DoNotOptimize(plan_cvar(aug, 0.33));
}
BENCHMARK(BM_PlanCvar);

static void BM_LearnerEpisodes(benchmark::State& state) {
    LearnerConfig cfg;
    cfg.episodes = state.range(0);
    cfg.delta = 0.1;
    cfg.weighting = WeightingFunction::cvar(0.33);
    cfg.mode = LearnerMode::ucb;
    cfg.seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(run_learning(lake().mdp, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LearnerEpisodes)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
