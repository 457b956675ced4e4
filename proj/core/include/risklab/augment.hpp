#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "risklab/mdp.hpp"

namespace risklab {

/// Time-indexed action tables over augmented states (s, y-lattice-index).
/// t is 1-based; storage is dense [t][s][y][a].
class AugmentedPolicy {
  public:
    AugmentedPolicy(int horizon, int n_states, int y_levels, int n_actions);

    /// Uniform action distribution in every cell.
    static AugmentedPolicy uniform(int horizon, int n_states, int y_levels, int n_actions);
    /// The same single action in every cell.
    static AugmentedPolicy constant(int horizon, int n_states, int y_levels, int n_actions, int action);

    std::span<const double> at(int t, int s, int y) const;
    void set(int t, int s, int y, std::span<const double> probs);
    void set_action(int t, int s, int y, int action);

    int horizon() const { return horizon_; }
    int n_states() const { return n_states_; }
    int y_levels() const { return y_levels_; }
    int n_actions() const { return n_actions_; }
    const std::vector<double>& raw() const { return data_; }

    /// One action index per cell when every cell is one-hot, else nullopt.
    std::optional<std::vector<std::int8_t>> deterministic_actions() const;

    /// Copy with the state range shrunk or grown; new states get uniform rows.
    AugmentedPolicy with_states(int new_n_states) const;

  private:
    std::size_t offset(int t, int s, int y) const;
    int horizon_, n_states_, y_levels_, n_actions_;
    std::vector<double> data_;
};

/// The augmented MDP over (state, cumulative-reward) pairs. The base MDP is
/// stored with rewards already pushed forward onto the eta lattice, so the
/// augmented transition (s,y) -a-> (s', y + r_index) is exact integer
/// arithmetic. Rewards are paid only at episode end: payoff(s, y) = y * eta.
struct AugmentedMdp {
    TabularMdp base;  // base.eta == eta after discretization
    double eta = 1.0;
    int y_levels = 0;  // T/eta + 1; y indices run 0 .. T/eta

    int augmented_state_count() const { return base.n_states * y_levels; }
};

/// Integer ratio eta / base_eta; throws DomainError unless eta is a positive
/// integer multiple of base_eta and 1/eta is integral (so the round-up map
/// keeps rewards inside [0,1] and T/eta is an integer).
int lattice_ratio(double eta, double base_eta);

/// Pushforward of every reward distribution under phi(r) = eta * ceil(r/eta).
TabularMdp discretize_rewards(const TabularMdp& mdp, double eta);

/// Augmented model on the eta lattice with initial state (s ~ D, y = 0).
AugmentedMdp build_augmented(const TabularMdp& mdp, double eta);

/// History policy for the original MDP that tracks the discretized
/// cumulative reward: each observed reward is rounded up to the eta lattice
/// and accumulated, and the augmented policy is queried at (t, s_t, y_t).
/// The returned policy is stateless over the history prefix, so one instance
/// may serve any number of concurrent rollouts.
class AdaptedPolicy : public HistoryPolicy {
  public:
    AdaptedPolicy(AugmentedPolicy policy, double eta);
    std::vector<double> action_probabilities(int t, const HistoryView& history) const override;
    double eta() const { return eta_; }

  private:
    AugmentedPolicy policy_;
    double eta_;
};

AdaptedPolicy adapt_policy(AugmentedPolicy policy, double eta);

/// The reduction of a history-dependent policy to an augmented one: for each
/// reachable (t, s, y) the action distribution is the conditional expectation
/// of pi over histories with that exact lattice cumulative reward and state.
/// Unreachable cells are filled uniformly. Requires full history enumeration;
/// throws OracleTooLarge past the cap.
AugmentedPolicy build_tilde_policy(const TabularMdp& mdp, const HistoryPolicy& policy,
                                   std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace risklab
