#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "risklab/augment.hpp"
#include "risklab/distribution.hpp"
#include "risklab/mdp.hpp"
#include "risklab/rng.hpp"
#include "risklab/weighting.hpp"

namespace risklab::testing {

/// Random distribution on the lattice {0, h, ..., n*h}: between 1 and
/// max_atoms atoms with Dirichlet-ish weights.
inline DiscreteDistribution random_lattice_distribution(rng::Stream& rng, int max_points = 12,
                                                        double step = 0.125) {
    int n = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_points));
    std::vector<int> indices;
    int cursor = 0;
    for (int i = 0; i < n; ++i) {
        cursor += static_cast<int>(rng.next_u64() % 3);  // may repeat; dedupe below
        indices.push_back(cursor++);
    }
    std::vector<double> grid, mass;
    double total = 0.0;
    for (int idx : indices) {
        grid.push_back(static_cast<double>(idx) * step);
        double w = rng.uniform() + 1e-3;
        mass.push_back(w);
        total += w;
    }
    for (double& m : mass) m /= total;
    return DiscreteDistribution(std::move(grid), std::move(mass));
}

/// Random Lipschitz weighting: CVaR, expectation, or piecewise linear.
inline WeightingFunction random_lipschitz_weighting(rng::Stream& rng) {
    switch (rng.next_u64() % 3) {
        case 0:
            return WeightingFunction::cvar(0.05 + 0.95 * rng.uniform());
        case 1:
            return WeightingFunction::expectation();
        default: {
            int segments = 2 + static_cast<int>(rng.next_u64() % 3);
            std::vector<std::pair<double, double>> knots;
            std::vector<double> ts{0.0, 1.0}, vs{0.0, 1.0};
            for (int i = 1; i < segments; ++i) {
                ts.push_back(rng.uniform());
                vs.push_back(rng.uniform());
            }
            std::sort(ts.begin(), ts.end());
            std::sort(vs.begin(), vs.end());
            for (std::size_t i = 0; i < ts.size(); ++i) {
                if (i > 0 && ts[i] <= knots.back().first + 1e-6) continue;
                knots.push_back({ts[i], vs[i]});
            }
            knots.back() = {1.0, 1.0};
            if (knots.size() < 2) knots = {{0.0, 0.0}, {1.0, 1.0}};
            return WeightingFunction::piecewise_linear(std::move(knots));
        }
    }
}

/// History-dependent stochastic policy: action probabilities are a
/// deterministic hash of (seed, t, the full prefix), with full support so
/// enumeration visits every branch.
class RandomHistoryPolicy : public HistoryPolicy {
  public:
    RandomHistoryPolicy(int n_actions, std::uint64_t seed) : n_actions_(n_actions), seed_(seed) {}

    std::vector<double> action_probabilities(int t, const HistoryView& history) const override {
        std::uint64_t h = seed_ ^ 0x9E3779B97F4A7C15ULL;
        auto mix = [&h](std::uint64_t v) {
            h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
            h = h * 0x100000001B3ULL;
        };
        mix(static_cast<std::uint64_t>(t));
        mix(static_cast<std::uint64_t>(history.current_state) + 101);
        for (const EpisodeStep& s : history.steps) {
            mix(static_cast<std::uint64_t>(s.state) + 3);
            mix(static_cast<std::uint64_t>(s.action) + 7);
            mix(static_cast<std::uint64_t>(s.reward_index) + 13);
        }
        std::vector<double> probs(static_cast<std::size_t>(n_actions_));
        double total = 0.0;
        for (int a = 0; a < n_actions_; ++a) {
            rng::Stream local(h + static_cast<std::uint64_t>(a) * 0xBF58476D1CE4E5B9ULL);
            probs[static_cast<std::size_t>(a)] = 0.15 + local.uniform();
            total += probs[static_cast<std::size_t>(a)];
        }
        for (double& p : probs) p /= total;
        return probs;
    }

  private:
    int n_actions_;
    std::uint64_t seed_;
};

/// Random time-varying Markov policy tables for an MDP.
inline MarkovPolicy random_markov_policy(const TabularMdp& mdp, std::uint64_t seed) {
    rng::Stream rng(seed);
    std::vector<std::vector<std::vector<double>>> tables(
        static_cast<std::size_t>(mdp.horizon),
        std::vector<std::vector<double>>(static_cast<std::size_t>(mdp.n_states),
                                         std::vector<double>(static_cast<std::size_t>(mdp.n_actions))));
    for (auto& per_state : tables)
        for (auto& row : per_state) {
            double total = 0.0;
            for (double& p : row) {
                p = 0.1 + rng.uniform();
                total += p;
            }
            for (double& p : row) p /= total;
        }
    return MarkovPolicy(std::move(tables));
}

}  // namespace risklab::testing
