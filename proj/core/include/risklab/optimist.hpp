#pragma once

#include <cstdint>
#include <vector>

#include "risklab/mdp.hpp"

namespace risklab {

/// Visit counts accumulated episode by episode. The single mutable object in
/// the learning loop; model construction from a snapshot is pure.
struct CountsModel {
    int n_states = 0;
    int n_actions = 0;
    int horizon = 0;
    double eta = 1.0;                                     // reward lattice of the observed MDP
    std::vector<double> init;                             // D is assumed known
    std::size_t reward_levels = 0;                        // histogram width: 1/eta + 1
    std::vector<std::int64_t> visits;                     // N(s,a), [s*A+a]
    std::vector<std::int64_t> transitions;                // N(s,a,s'), [(s*A+a)*S+s']
    std::vector<std::int64_t> reward_hist;                // [(s*A+a)*reward_levels + r]
    std::int64_t episodes = 0;                            // k

    static CountsModel for_mdp(const TabularMdp& mdp);

    std::int64_t visit_count(int s, int a) const { return visits[index(s, a)]; }
    std::size_t index(int s, int a) const { return static_cast<std::size_t>(s) * n_actions + a; }

    /// Consistency: N(s,a) equals both the transition-row and reward-row
    /// totals; all counts nonnegative. Throws DomainError otherwise.
    void validate() const;
};

/// Adds every transition and reward of the episode; increments the episode
/// index. Episodes from a different model shape are rejected.
void update_counts(CountsModel& counts, const Episode& episode);

struct ConfidenceWidths {
    std::vector<double> eps_p;  // [s*A+a]
    std::vector<double> eps_r;
};

/// The high-probability widths
///   eps_P(s,a) = sqrt(2|S|/N * log(6|S||A|K/delta))
///   eps_R(s,a) = sqrt(log(6|S||A|K/delta) / (2N))
/// with +infinity sentinels where N(s,a) = 0.
ConfidenceWidths confidence_widths(const CountsModel& counts, std::int64_t total_episodes, double delta);

/// Empirical estimates with placeholder rows where nothing was observed:
/// unvisited (s,a) get uniform transitions and a zero-reward point mass (the
/// greedy baseline plans on exactly this model) and are flagged in
/// `visited` for the optimistic construction to override.
struct EmpiricalModel {
    TabularMdp mdp;
    std::vector<char> visited;  // [s*A+a]

    bool is_visited(int s, int a) const { return visited[static_cast<std::size_t>(s) * mdp.n_actions + a] != 0; }
};

EmpiricalModel empirical_model(const CountsModel& counts);

/// The optimistic MDP: one extra absorbing state s_inf (index n_states of the
/// empirical model) that pays reward 1 forever. Visited rows shift each
/// non-s_inf transition probability down by eps_R(s,a) (clamped at 0) and
/// assign the deficit to s_inf, and shift the reward CDF down by eps_R(s,a)
/// (clamped at 0, forced to 1 at r = 1). Unvisited rows send all mass to
/// s_inf with reward point mass 1.
struct OptimisticModel {
    TabularMdp mdp;       // n_states + 1 states; the last one is s_inf
    int s_inf = 0;
    ConfidenceWidths widths;  // widths actually applied, per base (s,a)
};

OptimisticModel optimistic_model(const EmpiricalModel& empirical, const ConfidenceWidths& widths);

}  // namespace risklab
