#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "risklab/distribution.hpp"

namespace risklab {

/// Probability mass over reward lattice indices; index i carries value
/// i * eta, with eta owned by the enclosing TabularMdp.
struct LatticePmf {
    std::vector<double> mass;

    static LatticePmf point(std::size_t index, std::size_t size);
    double total() const;
    std::size_t max_index() const { return mass.empty() ? 0 : mass.size() - 1; }
    DiscreteDistribution to_distribution(double eta) const { return DiscreteDistribution::from_lattice(mass, eta); }
};

/// Finite-horizon tabular MDP. Rewards live on the eta-lattice inside [0,1];
/// transition rows are row-stochastic. Immutable once validated; shareable
/// across threads.
struct TabularMdp {
    int n_states = 0;
    int n_actions = 0;
    int horizon = 0;
    double eta = 1.0;
    std::vector<double> init;                           // D(s), size n_states
    std::vector<std::vector<std::vector<double>>> trans;  // P[s][a][s']
    std::vector<std::vector<LatticePmf>> rewards;         // per (s,a)

    /// Throws DomainError when any invariant fails.
    void validate() const;

    /// Largest lattice index a single reward can take: round(1/eta) when the
    /// lattice reaches 1. Computed from the reward tables.
    std::size_t max_reward_index() const;
    /// Largest cumulative-reward index over a full episode.
    std::size_t max_return_index() const { return static_cast<std::size_t>(horizon) * max_reward_index(); }
};

struct EpisodeStep {
    int state = 0;
    int action = 0;
    int reward_index = 0;  // reward value = reward_index * eta
};

/// One rollout of length exactly T plus the final state; rewards are stored
/// as lattice indices so cumulative sums are exact integers.
struct Episode {
    std::vector<EpisodeStep> steps;
    int final_state = 0;
    std::uint64_t seed = 0;

    double total_reward(double eta) const;
};

/// The prefix xi_t visible to a policy at step t: completed steps plus the
/// current state. eta is the reward lattice of the generating MDP.
struct HistoryView {
    std::span<const EpisodeStep> steps;
    int current_state = 0;
    double eta = 1.0;
};

/// Stochastic, time-varying, history-dependent policy contract. t is
/// 1-based. Implementations must return a probability vector over actions.
class HistoryPolicy {
  public:
    virtual ~HistoryPolicy() = default;
    virtual std::vector<double> action_probabilities(int t, const HistoryView& history) const = 0;
};

/// History-independent policy given by per-step action tables [t][s][a].
class MarkovPolicy : public HistoryPolicy {
  public:
    MarkovPolicy(std::vector<std::vector<std::vector<double>>> tables) : tables_(std::move(tables)) {}
    std::vector<double> action_probabilities(int t, const HistoryView& history) const override {
        return tables_.at(static_cast<std::size_t>(t - 1)).at(static_cast<std::size_t>(history.current_state));
    }

  private:
    std::vector<std::vector<std::vector<double>>> tables_;
};

/// Samples one episode: s_1 ~ D, a_t ~ pi_t(. | xi_t), r_t ~ P_R(s_t,a_t),
/// s_{t+1} ~ P(. | s_t,a_t). The same (mdp, policy, seed) triple always
/// yields the same episode. Policies returning invalid distributions raise
/// ContractViolation.
Episode rollout(const TabularMdp& mdp, const HistoryPolicy& policy, std::uint64_t seed);

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Walks every positive-probability history prefix of the MDP under the
/// policy, calling visit(t, steps, state, cum_reward_index, prob) for each
/// prefix (t runs 1..T+1; t = T+1 visits are complete episodes). Throws
/// OracleTooLarge once more than `cap` complete episodes have been reached.
void enumerate_histories(
    const TabularMdp& mdp, const HistoryPolicy& policy, std::uint64_t cap,
    const std::function<void(int, std::span<const EpisodeStep>, int, int, double)>& visit);

/// Exact distribution of the episode return Z = sum_t r_t by full trajectory
/// enumeration. The independent oracle against which Bellman evaluation is
/// checked. Throws OracleTooLarge past the cap; never truncates.
DiscreteDistribution exact_return_distribution(const TabularMdp& mdp, const HistoryPolicy& policy,
                                               std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace risklab
