#pragma once

#include <cstdint>
#include <vector>

#include "risklab/augment.hpp"
#include "risklab/distribution.hpp"
#include "risklab/weighting.hpp"

namespace risklab {

/// Return-to-go distributions per (t, s, y): mass over lattice indices
/// 0..T/eta of Z_t, the reward still to come from step t at that augmented
/// state. Z_{T+1} is identically a point mass at 0.
struct ReturnTable {
    int horizon = 0;
    int n_states = 0;
    int y_levels = 0;
    double eta = 1.0;
    std::vector<std::vector<double>> z;  // [(t-1)*S*Y + s*Y + y], t in 1..T+1

    const std::vector<double>& at(int t, int s, int y) const;
};

/// Full backward table, for inspection and tests.
ReturnTable compute_return_table(const AugmentedMdp& aug, const AugmentedPolicy& policy);

/// Exact law of the episode return under the policy: backward distributional
/// Bellman convolution over the augmented lattice, then averaged over the
/// initial distribution.
DiscreteDistribution evaluate_policy_distribution(const AugmentedMdp& aug, const AugmentedPolicy& policy);

struct CvarPlanResult {
    AugmentedPolicy policy;
    double rho_star = 0.0;  // maximizing threshold, on the eta lattice
    double value = 0.0;     // exact CVaR of the returned policy
    double alpha = 1.0;
    double eta = 1.0;
    DiscreteDistribution return_distribution;  // exact law of the policy's return
};

/// CVaR planner via the threshold representation
///   CVaR_a(Z) = max_rho { rho + E[min(Z - rho, 0)] / a }.
/// For each rho on the eta lattice in [0, T], backward expected-utility value
/// iteration with terminal utility min(y - rho, 0) and greedy deterministic
/// action choice (ties to the lowest action index); the outer objective
/// J(rho) is maximized over the grid (first maximizer wins). The reported
/// value is the exact CVaR of the argmax policy, recomputed through
/// evaluate_policy_distribution.
CvarPlanResult plan_cvar(const AugmentedMdp& aug, double alpha);

struct BruteForceResult {
    AugmentedPolicy policy;
    double value = 0.0;
};

inline constexpr std::uint64_t kDefaultPolicyCap = 1'000'000;

/// Exhaustive optimum over deterministic augmented policies on reachable
/// (t, s, y) cells, scored by phi_quantile of the exact return law. Ties
/// break toward the lexicographically smallest action assignment. Throws
/// OracleTooLarge when the policy count exceeds the cap.
BruteForceResult plan_bruteforce(const AugmentedMdp& aug, const WeightingFunction& g,
                                 std::uint64_t cap = kDefaultPolicyCap);

}  // namespace risklab
