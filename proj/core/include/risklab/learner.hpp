#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "risklab/mdp.hpp"
#include "risklab/weighting.hpp"

namespace risklab {

enum class LearnerMode { ucb, greedy, expected_ucb };

std::string mode_name(LearnerMode mode);
LearnerMode mode_from_name(const std::string& name);

struct LearnerConfig {
    std::int64_t episodes = 1;     // K
    double delta = 0.1;
    double eta = 0.0;              // 0: use the true MDP's reward lattice
    WeightingFunction weighting = WeightingFunction::expectation();  // objective for regret
    LearnerMode mode = LearnerMode::ucb;
    std::uint64_t seed = 0;        // root seed; episode k draws stream (seed, k)
    // Diagnostic multiplier on both confidence widths. 1.0 is the analyzed
    // construction; smaller values trade the guarantee for faster
    // convergence when studying the exploration constants empirically.
    double width_scale = 1.0;
};

struct RegretRow {
    std::int64_t k = 0;
    int policy_id = 0;      // index into the run's distinct planned policies
    double max_return = 0.0;  // top of the true return law's support; identifies the path taken
    double phi_true = 0.0;  // exact objective of the planned policy on the true MDP
    double phi_opt = 0.0;   // objective of the planned policy on the planning model
    double regret = 0.0;    // phi_star - phi_true
    double regret_cum = 0.0;
};

struct RegretTrace {
    double phi_star = 0.0;  // optimum of the objective on the true MDP
    double oracle_max_return = 0.0;
    LearnerConfig config;
    std::string planning_objective;  // "cvar(alpha)" or "expectation"
    std::vector<RegretRow> rows;

    double final_cumulative_regret() const { return rows.empty() ? 0.0 : rows.back().regret_cum; }
};

/// Algorithm: for k = 1..K build the model from episodes 1..k-1 (optimistic
/// for ucb modes, plain empirical for greedy), plan on it, act on the true
/// MDP, record exact regret against the true optimum. Ground-truth
/// evaluation is used for reporting only. Weightings must have finite
/// Lipschitz constant (VaR is rejected).
RegretTrace run_learning(const TabularMdp& true_mdp, const LearnerConfig& config);

struct OptimismAudit {
    double violation_fraction = 0.0;
    std::vector<std::int64_t> violating_episodes;
};

/// Fraction of episodes where the planning model failed to be optimistic,
/// i.e. phi_opt < phi_true - 1e-9.
OptimismAudit optimism_audit(const RegretTrace& trace);

}  // namespace risklab
