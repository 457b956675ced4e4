#include "risklab/envs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "risklab/errors.hpp"

namespace risklab {

FrozenLakeSpec FrozenLakeSpec::default_spec() {
    // Cross of four length-4 corridors around the start, with {3,2,1,0} thin
    // ice cells on the {west,south,east,north} arms and goals 1..4 at their
    // ends. Everything off the cross is a hole.
    FrozenLakeSpec spec;
    spec.map = {
        "HHHH4HHHH",
        "HHHH.HHHH",
        "HHHH.HHHH",
        "HHHH.HHHH",
        "1~~~S~..3",
        "HHHH~HHHH",
        "HHHH~HHHH",
        "HHHH.HHHH",
        "HHHH2HHHH",
    };
    return spec;
}

int FrozenLake::state_at(int row, int col) const {
    if (row < 0 || col < 0 || row >= static_cast<int>(map.size()) ||
        col >= static_cast<int>(map[static_cast<std::size_t>(row)].size()))
        return -1;
    char c = map[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
    if (c == 'H') return -1;
    int id = 0;
    for (int r = 0; r <= row; ++r) {
        const std::string& line = map[static_cast<std::size_t>(r)];
        int limit = (r == row) ? col : static_cast<int>(line.size());
        for (int cc = 0; cc < limit; ++cc)
            if (line[static_cast<std::size_t>(cc)] != 'H') ++id;
    }
    return id;
}

FrozenLake make_frozen_lake(const FrozenLakeSpec& spec) {
    if (spec.map.empty()) throw DomainError("frozen lake: empty map");
    if (!(spec.slip >= 0.0 && spec.slip <= 1.0)) throw DomainError("frozen lake: slip must lie in [0,1]");
    if (spec.rewards.empty()) throw DomainError("frozen lake: empty reward list");
    if (spec.horizon < 1) throw DomainError("frozen lake: horizon must be positive");

    const int n_rows = static_cast<int>(spec.map.size());
    const int n_cols = static_cast<int>(spec.map.front().size());
    int start_row = -1, start_col = -1;
    int n_cells = 0;
    for (int r = 0; r < n_rows; ++r) {
        const std::string& line = spec.map[static_cast<std::size_t>(r)];
        if (static_cast<int>(line.size()) != n_cols)
            throw DomainError("frozen lake: map parse error at line " + std::to_string(r + 1) +
                              ": ragged row (expected " + std::to_string(n_cols) + " columns)");
        for (int c = 0; c < n_cols; ++c) {
            char ch = line[static_cast<std::size_t>(c)];
            if (ch == 'S') {
                if (start_row >= 0)
                    throw DomainError("frozen lake: map parse error at line " + std::to_string(r + 1) + ", column " +
                                      std::to_string(c + 1) + ": second start cell");
                start_row = r;
                start_col = c;
            } else if (ch >= '1' && ch <= '9') {
                int id = ch - '0';
                if (id > static_cast<int>(spec.rewards.size()))
                    throw DomainError("frozen lake: map parse error at line " + std::to_string(r + 1) + ", column " +
                                      std::to_string(c + 1) + ": goal id " + std::to_string(id) +
                                      " has no reward entry");
            } else if (ch != '.' && ch != '~' && ch != 'H') {
                throw DomainError("frozen lake: map parse error at line " + std::to_string(r + 1) + ", column " +
                                  std::to_string(c + 1) + ": unknown cell '" + std::string(1, ch) + "'");
            }
            if (ch != 'H') ++n_cells;
        }
    }
    if (start_row < 0) throw DomainError("frozen lake: map parse error: no start cell");

    double scale = *std::max_element(spec.rewards.begin(), spec.rewards.end());
    if (!(scale > 0.0)) throw DomainError("frozen lake: rewards must be positive");
    double inv_eta = 1.0 / spec.eta;
    if (std::abs(inv_eta - std::round(inv_eta)) > 1e-9)
        throw DomainError("frozen lake: 1/eta must be integral");
    std::size_t reward_levels = static_cast<std::size_t>(std::llround(inv_eta)) + 1;

    FrozenLake lake;
    lake.map = spec.map;
    lake.reward_scale = scale;
    lake.hole_state = n_cells;  // one absorbing hole after all walkable cells

    TabularMdp& m = lake.mdp;
    m.n_states = n_cells + 1;
    m.n_actions = 4;
    m.horizon = spec.horizon;
    m.eta = spec.eta;
    m.init.assign(static_cast<std::size_t>(m.n_states), 0.0);
    m.trans.assign(static_cast<std::size_t>(m.n_states),
                   std::vector<std::vector<double>>(4, std::vector<double>(static_cast<std::size_t>(m.n_states), 0.0)));
    m.rewards.assign(static_cast<std::size_t>(m.n_states), std::vector<LatticePmf>(4));

    auto zero_reward = [&]() { return LatticePmf::point(0, reward_levels); };
    auto goal_reward = [&](int id) {
        double internal = spec.rewards[static_cast<std::size_t>(id - 1)] / scale;
        double idx = internal * inv_eta;
        if (std::abs(idx - std::round(idx)) > 1e-9)
            throw DomainError("frozen lake: normalized reward " + std::to_string(internal) +
                              " is not on the eta lattice");
        return LatticePmf::point(static_cast<std::size_t>(std::llround(idx)), reward_levels);
    };

    static constexpr int kDr[4] = {-1, 0, 1, 0};
    static constexpr int kDc[4] = {0, 1, 0, -1};

    lake.start_state = lake.state_at(start_row, start_col);
    m.init[static_cast<std::size_t>(lake.start_state)] = 1.0;

    for (int r = 0; r < n_rows; ++r) {
        for (int c = 0; c < n_cols; ++c) {
            char here = spec.map[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            if (here == 'H') continue;
            int s = lake.state_at(r, c);
            bool absorbing = (here >= '1' && here <= '9');
            for (int a = 0; a < 4; ++a) {
                m.rewards[s][a] = zero_reward();
                if (absorbing) {  // goals hold the agent with no further reward
                    m.trans[s][a][static_cast<std::size_t>(s)] = 1.0;
                    continue;
                }
                int r2 = r + kDr[a], c2 = c + kDc[a];
                bool off_map = r2 < 0 || r2 >= n_rows || c2 < 0 || c2 >= n_cols;
                char dest = off_map ? '\0' : spec.map[static_cast<std::size_t>(r2)][static_cast<std::size_t>(c2)];
                if (off_map) {
                    m.trans[s][a][static_cast<std::size_t>(s)] = 1.0;
                } else if (dest == 'H') {
                    m.trans[s][a][static_cast<std::size_t>(lake.hole_state)] = 1.0;
                } else if (dest == '~') {
                    int target = lake.state_at(r2, c2);
                    m.trans[s][a][static_cast<std::size_t>(target)] = 1.0 - spec.slip;
                    m.trans[s][a][static_cast<std::size_t>(lake.hole_state)] += spec.slip;
                } else {
                    int target = lake.state_at(r2, c2);
                    m.trans[s][a][static_cast<std::size_t>(target)] = 1.0;
                    if (dest >= '1' && dest <= '9') m.rewards[s][a] = goal_reward(dest - '0');
                }
            }
        }
    }
    // the hole absorbs with no reward
    for (int a = 0; a < 4; ++a) {
        m.trans[lake.hole_state][a][static_cast<std::size_t>(lake.hole_state)] = 1.0;
        m.rewards[lake.hole_state][a] = zero_reward();
    }
    m.validate();
    return lake;
}

namespace {

TabularMdp single_state_mdp(int n_actions, int horizon, double eta, std::vector<LatticePmf> rewards) {
    TabularMdp m;
    m.n_states = 1;
    m.n_actions = n_actions;
    m.horizon = horizon;
    m.eta = eta;
    m.init = {1.0};
    m.trans.assign(1, std::vector<std::vector<double>>(static_cast<std::size_t>(n_actions), {1.0}));
    m.rewards.assign(1, std::move(rewards));
    m.validate();
    return m;
}

LatticePmf pmf(std::size_t levels, std::vector<std::pair<std::size_t, double>> atoms) {
    LatticePmf p;
    p.mass.assign(levels, 0.0);
    for (auto [i, w] : atoms) p.mass.at(i) = w;
    return p;
}

}  // namespace

std::vector<TestMdp> make_test_mdps() {
    std::vector<TestMdp> out;

    // deterministic chain: reward 1/2 every step, T = 2
    out.push_back({"const_chain", single_state_mdp(1, 2, 0.5, {pmf(3, {{1, 1.0}})})});

    // fair coin reward each step, T = 2
    out.push_back({"coin_bandit", single_state_mdp(1, 2, 0.5, {pmf(3, {{0, 0.5}, {2, 0.5}})})});

    // one-step fork: risky arm {0, 1} vs safe arm 0.4; CVaR_0.5 and
    // expectation disagree on the best arm
    out.push_back({"risk_safe_fork",
                   single_state_mdp(2, 1, 0.2, {pmf(6, {{0, 0.5}, {5, 0.5}}), pmf(6, {{2, 1.0}})})});

    // gamble {0,1} or settle for 1/2, two steps: the optimal risk-sensitive
    // action at t = 2 depends on the accrued reward
    out.push_back({"gamble_then_settle",
                   single_state_mdp(2, 2, 0.125, {pmf(9, {{0, 0.5}, {8, 0.5}}), pmf(9, {{4, 1.0}})})});

    // three states, stochastic branch, stochastic rewards, T = 3
    {
        TabularMdp m;
        m.n_states = 3;
        m.n_actions = 2;
        m.horizon = 3;
        m.eta = 0.125;
        m.init = {1.0, 0.0, 0.0};
        m.trans = {
            {{0.0, 0.7, 0.3}, {0.0, 0.0, 1.0}},
            {{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}},
            {{0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}},
        };
        m.rewards = {
            {pmf(9, {{0, 1.0}}), pmf(9, {{2, 0.5}, {4, 0.5}})},
            {pmf(9, {{8, 1.0}}), pmf(9, {{4, 1.0}})},
            {pmf(9, {{0, 0.5}, {8, 0.5}}), pmf(9, {{1, 1.0}})},
        };
        m.validate();
        out.push_back({"branch_chain", std::move(m)});
    }

    // two equally likely initial states
    {
        TabularMdp m;
        m.n_states = 2;
        m.n_actions = 2;
        m.horizon = 2;
        m.eta = 0.125;
        m.init = {0.5, 0.5};
        m.trans = {
            {{1.0, 0.0}, {0.0, 1.0}},
            {{0.0, 1.0}, {1.0, 0.0}},
        };
        m.rewards = {
            {pmf(9, {{0, 1.0}}), pmf(9, {{4, 1.0}})},
            {pmf(9, {{0, 0.3}, {8, 0.7}}), pmf(9, {{6, 1.0}})},
        };
        m.validate();
        out.push_back({"mixed_start", std::move(m)});
    }

    return out;
}

}  // namespace risklab
