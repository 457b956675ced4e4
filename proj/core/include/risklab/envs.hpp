#pragma once

#include <string>
#include <vector>

#include "risklab/mdp.hpp"

namespace risklab {

/// Frozen-lake gridworld. Map cells: 'S' start (exactly one), '.' safe ice,
/// '~' thin ice (slip risk when stepped onto), 'H' hole, digit i = goal with
/// terminal reward rewards[i-1]. Rewards are normalized by their maximum so
/// per-step rewards live in [0,1] on the eta lattice; reported returns scale
/// back by reward_scale.
struct FrozenLakeSpec {
    std::vector<std::string> map;
    double slip = 0.1;
    std::vector<double> rewards = {6.0, 4.0, 2.0, 1.0};  // goal id -> reward
    int horizon = 6;
    double eta = 1.0 / 6.0;

    static FrozenLakeSpec default_spec();
};

/// Move actions, clockwise from north.
enum FrozenLakeAction : int { kUp = 0, kRight = 1, kDown = 2, kLeft = 3 };

struct FrozenLake {
    TabularMdp mdp;
    double reward_scale = 1.0;  // multiply internal returns by this for map units
    int start_state = 0;
    int hole_state = 0;
    std::vector<std::string> map;

    /// State index of the map cell at (row, col); -1 for 'H' cells (they all
    /// collapse into the absorbing hole state).
    int state_at(int row, int col) const;
};

/// Builds the tabular MDP. Moving onto a '~' cell succeeds with probability
/// 1 - slip and falls into the absorbing hole with probability slip; moving
/// onto 'H' falls in surely; off-map moves stay in place; entering goal d
/// pays d/scale once; goals and the hole are absorbing with zero reward.
/// Malformed maps raise DomainError naming the offending line and column.
FrozenLake make_frozen_lake(const FrozenLakeSpec& spec);

/// Small MDPs sized for exhaustive oracles.
struct TestMdp {
    std::string name;
    TabularMdp mdp;
};

/// Fixed catalogue: bandits, chains, and a risk/safe fork whose CVaR_0.5 and
/// expectation optima differ. Every member enumerates under the default caps.
std::vector<TestMdp> make_test_mdps();

}  // namespace risklab
