#include <doctest.h>

#include <cmath>

#include "risklab/envs.hpp"
#include "risklab/errors.hpp"
#include "risklab/mdp.hpp"
#include "risklab/planner.hpp"
#include "test_support.hpp"

using namespace risklab;

namespace {

/// Exact two-point return law of a constant-direction walk.
DiscreteDistribution corridor_law(const FrozenLake& lake, int action) {
    AugmentedMdp aug = build_augmented(lake.mdp, lake.mdp.eta);
    AugmentedPolicy pi =
        AugmentedPolicy::constant(lake.mdp.horizon, lake.mdp.n_states, aug.y_levels, lake.mdp.n_actions, action);
    return evaluate_policy_distribution(aug, pi);
}

}  // namespace

TEST_CASE("default map parses and matches the stated corridor structure") {
    FrozenLake lake = make_frozen_lake(FrozenLakeSpec::default_spec());
    CHECK(lake.mdp.n_states == 18);  // 17 walkable cells + absorbing hole
    CHECK(lake.mdp.n_actions == 4);
    CHECK(lake.mdp.horizon == 6);
    CHECK(lake.reward_scale == 6.0);
    lake.mdp.validate();

    struct Expect {
        int action;
        double ret;
        double success;
    };
    // success probabilities {1, 0.9, 0.81, 0.729} against returns {1, 2, 4, 6},
    // confirmed by both the Bellman backup and trajectory enumeration
    AugmentedMdp aug = build_augmented(lake.mdp, lake.mdp.eta);
    for (const Expect& e : {Expect{kUp, 1.0, 1.0}, Expect{kRight, 2.0, 0.9}, Expect{kDown, 4.0, 0.81},
                            Expect{kLeft, 6.0, 0.729}}) {
        DiscreteDistribution law = corridor_law(lake, e.action);
        CHECK(law.max_support() * lake.reward_scale == doctest::Approx(e.ret));
        CHECK(law.mass().back() == doctest::Approx(e.success));
        if (law.size() > 1) CHECK(law.mass().front() == doctest::Approx(1.0 - e.success));

        AugmentedPolicy walk =
            AugmentedPolicy::constant(lake.mdp.horizon, lake.mdp.n_states, aug.y_levels, lake.mdp.n_actions, e.action);
        DiscreteDistribution oracle = exact_return_distribution(lake.mdp, adapt_policy(walk, lake.mdp.eta));
        CHECK(oracle.mass().back() == doctest::Approx(e.success));
        CHECK(cdf_sup_distance(oracle, law) <= 1e-12);
    }
}

TEST_CASE("safe corridor reaches the goal on every seed") {
    FrozenLake lake = make_frozen_lake(FrozenLakeSpec::default_spec());
    AugmentedMdp aug = build_augmented(lake.mdp, lake.mdp.eta);
    AugmentedPolicy up =
        AugmentedPolicy::constant(lake.mdp.horizon, lake.mdp.n_states, aug.y_levels, lake.mdp.n_actions, kUp);
    AdaptedPolicy pi = adapt_policy(up, lake.mdp.eta);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Episode ep = rollout(lake.mdp, pi, seed);
        CHECK(ep.total_reward(lake.mdp.eta) * lake.reward_scale == doctest::Approx(1.0));
    }
}

TEST_CASE("oracle enumeration confirms the single-slip corridor") {
    FrozenLake lake = make_frozen_lake(FrozenLakeSpec::default_spec());
    AugmentedMdp aug = build_augmented(lake.mdp, lake.mdp.eta);
    AugmentedPolicy right =
        AugmentedPolicy::constant(lake.mdp.horizon, lake.mdp.n_states, aug.y_levels, lake.mdp.n_actions, kRight);
    DiscreteDistribution law = exact_return_distribution(lake.mdp, adapt_policy(right, lake.mdp.eta));
    REQUIRE(law.size() == 2);
    CHECK(law.mass()[0] == doctest::Approx(0.1));
    CHECK(law.grid()[1] * lake.reward_scale == doctest::Approx(2.0));
    CHECK(law.mass()[1] == doctest::Approx(0.9));
}

TEST_CASE("planner picks the closed-form best corridor per alpha") {
    FrozenLake lake = make_frozen_lake(FrozenLakeSpec::default_spec());
    AugmentedMdp aug = build_augmented(lake.mdp, lake.mdp.eta);

    const double rets[] = {1.0, 2.0, 4.0, 6.0};
    const double fails[] = {0.0, 0.1, 0.19, 0.271};
    for (double alpha : {0.1, 0.25, 0.33, 0.4, 1.0}) {
        double best = -1.0, best_ret = 0.0;
        for (int i = 0; i < 4; ++i) {
            double v = rets[i] * std::max(alpha - fails[i], 0.0) / alpha;
            if (v > best + 1e-12) {
                best = v;
                best_ret = rets[i];
            }
        }
        CvarPlanResult res = plan_cvar(aug, alpha);
        CHECK(res.value * lake.reward_scale == doctest::Approx(best));
        CHECK(res.return_distribution.max_support() * lake.reward_scale == doctest::Approx(best_ret));
    }
}

TEST_CASE("malformed maps fail with line and column positions") {
    FrozenLakeSpec spec = FrozenLakeSpec::default_spec();
    spec.map[4][4] = '.';
    CHECK_THROWS_WITH_AS(make_frozen_lake(spec), doctest::Contains("no start cell"), DomainError);

    spec = FrozenLakeSpec::default_spec();
    spec.map[2][2] = 'S';
    CHECK_THROWS_WITH_AS(make_frozen_lake(spec), doctest::Contains("line 5"), DomainError);

    spec = FrozenLakeSpec::default_spec();
    spec.map[3][1] = '?';
    CHECK_THROWS_WITH_AS(make_frozen_lake(spec), doctest::Contains("line 4, column 2"), DomainError);

    spec = FrozenLakeSpec::default_spec();
    spec.map[0] += "H";
    CHECK_THROWS_WITH_AS(make_frozen_lake(spec), doctest::Contains("ragged"), DomainError);

    spec = FrozenLakeSpec::default_spec();
    spec.map[0][4] = '7';
    CHECK_THROWS_WITH_AS(make_frozen_lake(spec), doctest::Contains("goal id 7"), DomainError);
}

TEST_CASE("catalogue members are valid, enumerable, and within planner caps") {
    std::vector<TestMdp> catalogue = make_test_mdps();
    REQUIRE(!catalogue.empty());
    for (const TestMdp& t : catalogue) {
        CAPTURE(t.name);
        CHECK_NOTHROW(t.mdp.validate());
        CHECK(t.mdp.n_states <= 3);
        CHECK(t.mdp.n_actions <= 2);
        CHECK(t.mdp.horizon <= 3);
        testing::RandomHistoryPolicy pi(t.mdp.n_actions, 1);
        CHECK_NOTHROW(exact_return_distribution(t.mdp, pi));
        AugmentedMdp aug = build_augmented(t.mdp, t.mdp.eta);
        CHECK_NOTHROW(plan_bruteforce(aug, WeightingFunction::expectation()));
    }
}

TEST_CASE("the fork splits its cvar and expectation optima") {
    for (const TestMdp& t : make_test_mdps()) {
        if (t.name != "risk_safe_fork") continue;
        AugmentedMdp aug = build_augmented(t.mdp, t.mdp.eta);
        BruteForceResult cvar_best = plan_bruteforce(aug, WeightingFunction::cvar(0.5));
        BruteForceResult exp_best = plan_bruteforce(aug, WeightingFunction::expectation());
        CHECK(cvar_best.policy.at(1, 0, 0)[1] == 1.0);
        CHECK(exp_best.policy.at(1, 0, 0)[0] == 1.0);
        return;
    }
    FAIL("risk_safe_fork missing from the catalogue");
}
