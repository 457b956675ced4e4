#include <doctest.h>

#include <cmath>

#include "risklab/envs.hpp"
#include "risklab/errors.hpp"
#include "risklab/learner.hpp"
#include "risklab/optimist.hpp"
#include "risklab/planner.hpp"
#include "test_support.hpp"

using namespace risklab;

namespace {

TabularMdp find_mdp(const char* name) {
    for (TestMdp& t : make_test_mdps())
        if (t.name == name) return std::move(t.mdp);
    throw std::runtime_error("no catalogue member named " + std::string(name));
}

}  // namespace

TEST_CASE("config validation") {
    TabularMdp m = find_mdp("coin_bandit");
    LearnerConfig cfg;
    cfg.episodes = 0;
    CHECK_THROWS_AS(run_learning(m, cfg), DomainError);
    cfg.episodes = 1;
    cfg.delta = 0.0;
    CHECK_THROWS_AS(run_learning(m, cfg), DomainError);
    cfg.delta = 0.1;
    cfg.weighting = WeightingFunction::var(0.5);
    CHECK_THROWS_AS(run_learning(m, cfg), DomainError);  // infinite Lipschitz constant
    cfg.weighting = WeightingFunction::piecewise_linear({{0.0, 0.0}, {1.0, 1.0}});
    CHECK_THROWS_AS(run_learning(m, cfg), DomainError);  // learner covers cvar/expectation only
}

TEST_CASE("with nothing visited the optimistic objective is T") {
    TabularMdp m = find_mdp("branch_chain");
    LearnerConfig cfg;
    cfg.episodes = 1;
    cfg.weighting = WeightingFunction::cvar(0.5);
    cfg.seed = 3;
    RegretTrace trace = run_learning(m, cfg);
    REQUIRE(trace.rows.size() == 1);
    CHECK(trace.rows[0].phi_opt == doctest::Approx(static_cast<double>(m.horizon)));
}

TEST_CASE("deterministic single-path model has zero regret from the start") {
    TabularMdp m = find_mdp("const_chain");  // one action: the only path is optimal
    LearnerConfig cfg;
    cfg.episodes = 5;
    cfg.weighting = WeightingFunction::cvar(0.3);
    cfg.seed = 9;
    RegretTrace trace = run_learning(m, cfg);
    for (const RegretRow& row : trace.rows) {
        CHECK(row.regret <= 1e-9);
        CHECK(row.regret >= -1e-9);
    }
    CHECK(trace.final_cumulative_regret() <= 5e-9);
}

TEST_CASE("regret rows are consistent and cumulative regret never decreases") {
    TabularMdp m = find_mdp("gamble_then_settle");
    for (LearnerMode mode : {LearnerMode::ucb, LearnerMode::greedy, LearnerMode::expected_ucb}) {
        LearnerConfig cfg;
        cfg.episodes = 40;
        cfg.weighting = WeightingFunction::cvar(0.4);
        cfg.mode = mode;
        cfg.seed = 17;
        RegretTrace trace = run_learning(m, cfg);
        REQUIRE(trace.rows.size() == 40);
        double cum = 0.0;
        for (const RegretRow& row : trace.rows) {
            CHECK(row.regret >= -1e-9);  // nothing beats the true optimum
            cum += row.regret;
            CHECK(row.regret_cum == doctest::Approx(cum));
            CHECK(row.phi_true <= trace.phi_star + 1e-9);
        }
    }
}

TEST_CASE("ucb mode converges on the fork while identifying the safe arm") {
    TabularMdp m = find_mdp("risk_safe_fork");
    LearnerConfig cfg;
    cfg.episodes = 300;
    cfg.weighting = WeightingFunction::cvar(0.5);
    cfg.mode = LearnerMode::ucb;
    cfg.seed = 23;
    RegretTrace trace = run_learning(m, cfg);
    // late episodes should mostly play the optimal safe arm (regret 0)
    int late_optimal = 0;
    for (std::size_t i = trace.rows.size() / 2; i < trace.rows.size(); ++i)
        if (trace.rows[i].regret <= 1e-9) ++late_optimal;
    CHECK(late_optimal >= static_cast<int>(trace.rows.size() / 2) * 3 / 4);
}

TEST_CASE("optimism audit flags nothing when widths cover the truth") {
    TabularMdp m = find_mdp("mixed_start");
    LearnerConfig cfg;
    cfg.episodes = 60;
    cfg.weighting = WeightingFunction::cvar(0.33);
    cfg.mode = LearnerMode::ucb;
    cfg.seed = 5;
    RegretTrace trace = run_learning(m, cfg);
    OptimismAudit audit = optimism_audit(trace);
    CHECK(audit.violation_fraction <= 0.1);
}

TEST_CASE("audit is exact at zero widths with the true model injected") {
    TabularMdp m = find_mdp("coin_bandit");
    // emulate one loop step by hand: exact counts, zero widths
    CountsModel counts = CountsModel::for_mdp(m);
    std::size_t k = counts.index(0, 0);
    counts.visits[k] = 2;
    counts.transitions[k * 1 + 0] = 2;
    counts.reward_hist[k * counts.reward_levels + 0] = 1;
    counts.reward_hist[k * counts.reward_levels + 2] = 1;
    EmpiricalModel emp = empirical_model(counts);
    ConfidenceWidths zero;
    zero.eps_p.assign(1, 0.0);
    zero.eps_r.assign(1, 0.0);
    OptimisticModel opt = optimistic_model(emp, zero);

    WeightingFunction g = WeightingFunction::cvar(0.5);
    AugmentedMdp aug_true = build_augmented(m, m.eta);
    AugmentedMdp aug_opt = build_augmented(opt.mdp, m.eta);
    CvarPlanResult plan = plan_cvar(aug_opt, 0.5);
    double phi_opt = phi_quantile(plan.return_distribution, g);
    double phi_true = phi_quantile(
        evaluate_policy_distribution(aug_true, plan.policy.with_states(m.n_states)), g);
    CHECK(phi_opt == doctest::Approx(phi_true));  // optimism holds with equality
}

TEST_CASE("expected-ucb plans for the mean but is scored on the config objective") {
    TabularMdp m = find_mdp("risk_safe_fork");
    LearnerConfig cfg;
    cfg.episodes = 250;
    cfg.weighting = WeightingFunction::cvar(0.5);
    cfg.mode = LearnerMode::expected_ucb;
    cfg.seed = 2;
    RegretTrace trace = run_learning(m, cfg);
    CHECK(trace.planning_objective == "expectation");
    // the mean-optimal risky arm has CVaR_0.5 = 0 against the optimum 0.4, so
    // once the model is learned the per-episode regret pins at 0.4
    double late = trace.rows.back().regret;
    CHECK(late == doctest::Approx(0.4).epsilon(0.05));
}

TEST_CASE("greedy mode never explores a zero-reward start") {
    // both arms unknown; greedy sees zero reward everywhere, ties on action 0
    // forever and never discovers the better arm 1
    TabularMdp m;
    m.n_states = 1;
    m.n_actions = 2;
    m.horizon = 1;
    m.eta = 0.5;
    m.init = {1.0};
    m.trans = {{{1.0}, {1.0}}};
    m.rewards = {{LatticePmf::point(0, 3), LatticePmf::point(2, 3)}};
    m.validate();

    LearnerConfig cfg;
    cfg.episodes = 30;
    cfg.weighting = WeightingFunction::cvar(0.5);
    cfg.mode = LearnerMode::greedy;
    cfg.seed = 1;
    RegretTrace trace = run_learning(m, cfg);
    for (const RegretRow& row : trace.rows) CHECK(row.regret == doctest::Approx(1.0));  // stuck at arm 0
}

TEST_CASE("identical configs produce identical traces") {
    TabularMdp m = find_mdp("branch_chain");
    LearnerConfig cfg;
    cfg.episodes = 25;
    cfg.weighting = WeightingFunction::cvar(0.33);
    cfg.seed = 77;
    RegretTrace a = run_learning(m, cfg);
    RegretTrace b = run_learning(m, cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].phi_true == b.rows[i].phi_true);
        CHECK(a.rows[i].phi_opt == b.rows[i].phi_opt);
        CHECK(a.rows[i].regret_cum == b.rows[i].regret_cum);
        CHECK(a.rows[i].policy_id == b.rows[i].policy_id);
    }
}
