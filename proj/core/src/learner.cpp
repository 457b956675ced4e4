#include "risklab/learner.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <unordered_map>

#include "risklab/augment.hpp"
#include "risklab/errors.hpp"
#include "risklab/optimist.hpp"
#include "risklab/planner.hpp"
#include "risklab/rng.hpp"

namespace risklab {

std::string mode_name(LearnerMode mode) {
    switch (mode) {
        case LearnerMode::ucb: return "ucb";
        case LearnerMode::greedy: return "greedy";
        case LearnerMode::expected_ucb: return "expected-ucb";
    }
    return "?";
}

LearnerMode mode_from_name(const std::string& name) {
    if (name == "ucb") return LearnerMode::ucb;
    if (name == "greedy") return LearnerMode::greedy;
    if (name == "expected-ucb") return LearnerMode::expected_ucb;
    throw DomainError("unknown learner mode: " + name);
}

namespace {

struct ActionTableHash {
    std::size_t operator()(const std::vector<std::int8_t>& v) const {
        std::size_t h = 1469598103934665603ULL;
        for (std::int8_t b : v) {
            h ^= static_cast<std::size_t>(static_cast<std::uint8_t>(b));
            h *= 1099511628211ULL;
        }
        return h;
    }
};

}  // namespace

RegretTrace run_learning(const TabularMdp& true_mdp, const LearnerConfig& config) {
    true_mdp.validate();
    if (config.episodes < 1) throw DomainError("learner: K must be at least 1");
    if (!(config.delta > 0.0 && config.delta <= 1.0)) throw DomainError("learner: delta must lie in (0,1]");
    if (!config.weighting.has_finite_lipschitz())
        throw DomainError("learner: weighting must have a finite Lipschitz constant (VaR is not supported)");
    if (config.weighting.kind() != WeightingFunction::Kind::cvar &&
        config.weighting.kind() != WeightingFunction::Kind::expectation)
        throw DomainError("learner: weighting must be CVaR or Expectation");
    if (!(config.width_scale > 0.0)) throw DomainError("learner: width_scale must be positive");

    double eta = config.eta > 0.0 ? config.eta : true_mdp.eta;
    const WeightingFunction& g = config.weighting;
    // CVaR(alpha) covers both cases: alpha = 1 is the expectation objective
    double objective_alpha = g.kind() == WeightingFunction::Kind::cvar ? g.alpha() : 1.0;
    double planning_alpha = config.mode == LearnerMode::expected_ucb ? 1.0 : objective_alpha;

    AugmentedMdp aug_true = build_augmented(true_mdp, eta);
    CvarPlanResult star = plan_cvar(aug_true, objective_alpha);

    RegretTrace trace;
    trace.phi_star = phi_quantile(star.return_distribution, g);
    trace.oracle_max_return = star.return_distribution.max_support();
    trace.config = config;
    trace.planning_objective = config.mode == LearnerMode::expected_ucb
                                   ? "expectation"
                                   : (objective_alpha == 1.0 ? "expectation"
                                                             : "cvar(" + std::to_string(objective_alpha) + ")");
    trace.rows.reserve(static_cast<std::size_t>(config.episodes));

    CountsModel counts = CountsModel::for_mdp(true_mdp);
    struct TrueEval {
        int id;
        double phi;
        double max_return;
    };
    std::unordered_map<std::vector<std::int8_t>, TrueEval, ActionTableHash> true_value_cache;
    double regret_cum = 0.0;

    for (std::int64_t k = 1; k <= config.episodes; ++k) {
        EmpiricalModel emp = empirical_model(counts);
        CvarPlanResult plan = [&] {
            if (config.mode == LearnerMode::greedy) {
                return plan_cvar(build_augmented(emp.mdp, eta), planning_alpha);
            }
            ConfidenceWidths widths = confidence_widths(counts, config.episodes, config.delta);
            if (config.width_scale != 1.0) {
                for (double& e : widths.eps_p) e *= config.width_scale;  // +inf stays +inf
                for (double& e : widths.eps_r) e *= config.width_scale;
            }
            OptimisticModel opt = optimistic_model(emp, widths);
            return plan_cvar(build_augmented(opt.mdp, eta), planning_alpha);
        }();

        double phi_opt = phi_quantile(plan.return_distribution, g);
        AugmentedPolicy policy = plan.policy.n_states() == true_mdp.n_states
                                     ? std::move(plan.policy)
                                     : plan.policy.with_states(true_mdp.n_states);  // drop the s_inf rows

        auto key = policy.deterministic_actions();
        TrueEval eval{};
        if (key) {
            auto it = true_value_cache.find(*key);
            if (it == true_value_cache.end()) {
                DiscreteDistribution dist = evaluate_policy_distribution(aug_true, policy);
                eval = TrueEval{static_cast<int>(true_value_cache.size()), phi_quantile(dist, g),
                                dist.max_support()};
                true_value_cache.emplace(std::move(*key), eval);
            } else {
                eval = it->second;
            }
        } else {
            DiscreteDistribution dist = evaluate_policy_distribution(aug_true, policy);
            eval = TrueEval{-1, phi_quantile(dist, g), dist.max_support()};
        }

        AdaptedPolicy acting = adapt_policy(policy, eta);
        Episode episode =
            rollout(true_mdp, acting, rng::Stream::fork(config.seed, static_cast<std::uint64_t>(k)).next_u64());
        update_counts(counts, episode);

        double regret = trace.phi_star - eval.phi;
        regret_cum += regret;
        trace.rows.push_back({k, eval.id, eval.max_return, eval.phi, phi_opt, regret, regret_cum});
    }
    return trace;
}

OptimismAudit optimism_audit(const RegretTrace& trace) {
    OptimismAudit audit;
    for (const RegretRow& row : trace.rows)
        if (row.phi_opt < row.phi_true - 1e-9) audit.violating_episodes.push_back(row.k);
    audit.violation_fraction =
        trace.rows.empty() ? 0.0
                           : static_cast<double>(audit.violating_episodes.size()) / static_cast<double>(trace.rows.size());
    return audit;
}

}  // namespace risklab
