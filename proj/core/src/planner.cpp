#include "risklab/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "risklab/errors.hpp"

namespace risklab {

namespace {

// Transition rows and reward pmfs as sparse (index, weight) lists; the dense
// tables are mostly zeros for the environments in this repo.
struct SparseModel {
    int S, A, Y;
    std::vector<std::vector<std::pair<int, double>>> succ;  // [s*A+a] -> (s2, p)
    std::vector<std::vector<std::pair<int, double>>> rew;   // [s*A+a] -> (r_index, mass)

    SparseModel(const TabularMdp& m, int y_levels) : S(m.n_states), A(m.n_actions), Y(y_levels) {
        succ.resize(static_cast<std::size_t>(S) * A);
        rew.resize(static_cast<std::size_t>(S) * A);
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                std::size_t k = static_cast<std::size_t>(s) * A + a;
                for (int s2 = 0; s2 < S; ++s2)
                    if (m.trans[s][a][s2] > 0.0) succ[k].push_back({s2, m.trans[s][a][s2]});
                const LatticePmf& rp = m.rewards[s][a];
                for (std::size_t r = 0; r < rp.mass.size(); ++r)
                    if (rp.mass[r] > 0.0) rew[k].push_back({static_cast<int>(r), rp.mass[r]});
            }
        }
    }
};

// Slices are flat [ (s*Y + y)*Y + j ] with j the return-to-go lattice index.
void backup_slice(const SparseModel& sm, const AugmentedPolicy& policy, int t, const std::vector<double>& next,
                  std::vector<double>& out) {
    int S = sm.S, A = sm.A, Y = sm.Y;
    std::fill(out.begin(), out.end(), 0.0);
    for (int s = 0; s < S; ++s) {
        for (int y = 0; y < Y; ++y) {
            double* cell = out.data() + (static_cast<std::size_t>(s) * Y + y) * Y;
            auto pi = policy.at(t, s, y);
            for (int a = 0; a < A; ++a) {
                double pa = pi[a];
                if (pa <= 0.0) continue;
                std::size_t k = static_cast<std::size_t>(s) * A + a;
                for (auto [r, mr] : sm.rew[k]) {
                    double pr = pa * mr;
                    // y + r stays within the lattice for every cell reachable
                    // at step t; the clamp only touches cells nothing reads
                    int y2 = std::min(y + r, Y - 1);
                    for (auto [s2, pt] : sm.succ[k]) {
                        double w = pr * pt;
                        const double* zn = next.data() + (static_cast<std::size_t>(s2) * Y + y2) * Y;
                        // convolution with the point reward r: shift by r slots
                        for (int j = r; j < Y; ++j) cell[j] += w * zn[j - r];
                    }
                }
            }
        }
    }
}

void set_terminal_slice(std::vector<double>& slice, int n_cells, int y_levels) {
    std::fill(slice.begin(), slice.end(), 0.0);
    for (int c = 0; c < n_cells; ++c) slice[static_cast<std::size_t>(c) * y_levels] = 1.0;  // Z_{T+1} = 0
}

void check_policy_shape(const AugmentedMdp& aug, const AugmentedPolicy& policy) {
    const TabularMdp& m = aug.base;
    if (policy.horizon() != m.horizon || policy.n_states() != m.n_states || policy.y_levels() != aug.y_levels ||
        policy.n_actions() != m.n_actions)
        throw DomainError("planner: policy shape does not match augmented model");
}

}  // namespace

const std::vector<double>& ReturnTable::at(int t, int s, int y) const {
    if (t < 1 || t > horizon + 1 || s < 0 || s >= n_states || y < 0 || y >= y_levels)
        throw DomainError("return table: cell out of range");
    return z[(static_cast<std::size_t>(t - 1) * n_states + s) * y_levels + y];
}

ReturnTable compute_return_table(const AugmentedMdp& aug, const AugmentedPolicy& policy) {
    check_policy_shape(aug, policy);
    const TabularMdp& m = aug.base;
    int Y = aug.y_levels;
    int n_cells = m.n_states * Y;
    SparseModel sm(m, Y);

    ReturnTable table;
    table.horizon = m.horizon;
    table.n_states = m.n_states;
    table.y_levels = Y;
    table.eta = aug.eta;
    table.z.assign(static_cast<std::size_t>(n_cells) * (m.horizon + 1), {});

    auto store = [&](int t, const std::vector<double>& slice) {
        for (int c = 0; c < n_cells; ++c) {
            const double* p = slice.data() + static_cast<std::size_t>(c) * Y;
            table.z[static_cast<std::size_t>(t - 1) * n_cells + c].assign(p, p + Y);
        }
    };

    std::vector<double> next(static_cast<std::size_t>(n_cells) * Y), cur(next.size());
    set_terminal_slice(next, n_cells, Y);
    store(m.horizon + 1, next);
    for (int t = m.horizon; t >= 1; --t) {
        backup_slice(sm, policy, t, next, cur);
        store(t, cur);
        std::swap(cur, next);
    }
    return table;
}

DiscreteDistribution evaluate_policy_distribution(const AugmentedMdp& aug, const AugmentedPolicy& policy) {
    check_policy_shape(aug, policy);
    const TabularMdp& m = aug.base;
    int Y = aug.y_levels;
    int n_cells = m.n_states * Y;
    SparseModel sm(m, Y);

    std::vector<double> next(static_cast<std::size_t>(n_cells) * Y), cur(next.size());
    set_terminal_slice(next, n_cells, Y);
    for (int t = m.horizon; t >= 1; --t) {
        backup_slice(sm, policy, t, next, cur);
        std::swap(cur, next);
    }
    std::vector<double> mass(static_cast<std::size_t>(Y), 0.0);
    for (int s = 0; s < m.n_states; ++s) {
        double d = m.init[s];
        if (d <= 0.0) continue;
        const double* z1 = next.data() + (static_cast<std::size_t>(s) * Y + 0) * Y;
        for (int j = 0; j < Y; ++j) mass[static_cast<std::size_t>(j)] += d * z1[j];
    }
    return DiscreteDistribution::from_lattice(mass, aug.eta);
}

CvarPlanResult plan_cvar(const AugmentedMdp& aug, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("plan_cvar: alpha must lie in (0,1]");
    const TabularMdp& m = aug.base;
    int S = m.n_states, A = m.n_actions;
    int Yn = aug.y_levels - 1;  // rho and y indices run 0..Yn
    SparseModel sm(m, aug.y_levels);

    // Inner problem for threshold rho: expected-utility value iteration with
    // terminal utility min(y_final - rho, 0). The y dynamics are translation
    // invariant, so one table W_t(s, d) over the deficit d = y - rho serves
    // every rho; d >= 0 saturates at utility 0. Stored index di = d + Yn.
    std::size_t width = static_cast<std::size_t>(Yn) + 1;
    std::vector<std::vector<double>> w(static_cast<std::size_t>(m.horizon + 2),
                                       std::vector<double>(static_cast<std::size_t>(S) * width, 0.0));
    for (int s = 0; s < S; ++s)
        for (std::size_t di = 0; di < width; ++di)
            w[static_cast<std::size_t>(m.horizon + 1)][static_cast<std::size_t>(s) * width + di] =
                (static_cast<double>(di) - static_cast<double>(Yn)) * aug.eta;

    auto q_value = [&](int t, int s, int a, std::size_t di) {
        const std::vector<double>& wn = w[static_cast<std::size_t>(t) + 1];
        std::size_t k = static_cast<std::size_t>(s) * A + a;
        double q = 0.0;
        for (auto [r, mr] : sm.rew[k]) {
            std::size_t di2 = std::min(di + static_cast<std::size_t>(r), static_cast<std::size_t>(Yn));
            double partial = 0.0;
            for (auto [s2, pt] : sm.succ[k]) partial += pt * wn[static_cast<std::size_t>(s2) * width + di2];
            q += mr * partial;
        }
        return q;
    };

    for (int t = m.horizon; t >= 1; --t) {
        std::vector<double>& wt = w[static_cast<std::size_t>(t)];
        for (int s = 0; s < S; ++s) {
            for (std::size_t di = 0; di < width; ++di) {
                double best = q_value(t, s, 0, di);
                for (int a = 1; a < A; ++a) best = std::max(best, q_value(t, s, a, di));
                wt[static_cast<std::size_t>(s) * width + di] = best;
            }
        }
    }

    // outer maximization of J(rho) = rho + V_rho / alpha; first maximizer wins
    int best_rho_idx = 0;
    double best_j = -std::numeric_limits<double>::infinity();
    for (int rho = 0; rho <= Yn; ++rho) {
        double v = 0.0;
        for (int s = 0; s < S; ++s) {
            if (m.init[s] <= 0.0) continue;
            v += m.init[s] * w[1][static_cast<std::size_t>(s) * width + static_cast<std::size_t>(Yn - rho)];
        }
        double j = static_cast<double>(rho) * aug.eta + v / alpha;
        if (j > best_j) {
            best_j = j;
            best_rho_idx = rho;
        }
    }

    // greedy action tables at the maximizing threshold; ties to action 0
    AugmentedPolicy policy(m.horizon, S, aug.y_levels, A);
    for (int t = 1; t <= m.horizon; ++t) {
        for (int s = 0; s < S; ++s) {
            for (int y = 0; y <= Yn; ++y) {
                long d = static_cast<long>(y) - best_rho_idx;
                std::size_t di = static_cast<std::size_t>(std::min<long>(d, 0) + Yn);
                int best_a = 0;
                double best_q = q_value(t, s, 0, di);
                for (int a = 1; a < A; ++a) {
                    double q = q_value(t, s, a, di);
                    if (q > best_q) {
                        best_q = q;
                        best_a = a;
                    }
                }
                policy.set_action(t, s, y, best_a);
            }
        }
    }

    DiscreteDistribution dist = evaluate_policy_distribution(aug, policy);
    double value = phi_quantile(dist, WeightingFunction::cvar(alpha));
    return CvarPlanResult{std::move(policy), static_cast<double>(best_rho_idx) * aug.eta, value, alpha, aug.eta,
                          std::move(dist)};
}

namespace {

struct Cell {
    int t, s, y;
    bool operator<(const Cell& o) const {
        if (t != o.t) return t < o.t;
        if (s != o.s) return s < o.s;
        return y < o.y;
    }
};

std::vector<Cell> reachable_cells(const AugmentedMdp& aug) {
    const TabularMdp& m = aug.base;
    int Y = aug.y_levels;
    std::vector<char> reach(static_cast<std::size_t>(m.n_states) * Y, 0);
    for (int s = 0; s < m.n_states; ++s)
        if (m.init[s] > 0.0) reach[static_cast<std::size_t>(s) * Y] = 1;
    std::vector<Cell> cells;
    for (int t = 1; t <= m.horizon; ++t) {
        std::vector<char> next(reach.size(), 0);
        for (int s = 0; s < m.n_states; ++s) {
            for (int y = 0; y < Y; ++y) {
                if (!reach[static_cast<std::size_t>(s) * Y + y]) continue;
                cells.push_back({t, s, y});
                for (int a = 0; a < m.n_actions; ++a) {
                    const LatticePmf& rp = m.rewards[s][a];
                    for (std::size_t r = 0; r < rp.mass.size(); ++r) {
                        if (rp.mass[r] <= 0.0) continue;
                        int y2 = std::min(y + static_cast<int>(r), Y - 1);
                        for (int s2 = 0; s2 < m.n_states; ++s2)
                            if (m.trans[s][a][s2] > 0.0) next[static_cast<std::size_t>(s2) * Y + y2] = 1;
                    }
                }
            }
        }
        reach = std::move(next);
    }
    std::sort(cells.begin(), cells.end());
    return cells;
}

}  // namespace

BruteForceResult plan_bruteforce(const AugmentedMdp& aug, const WeightingFunction& g, std::uint64_t cap) {
    const TabularMdp& m = aug.base;
    std::vector<Cell> cells = reachable_cells(aug);
    double log_count = static_cast<double>(cells.size()) * std::log(static_cast<double>(m.n_actions));
    if (log_count > std::log(static_cast<double>(cap)) + 1e-9)
        throw OracleTooLarge("plan_bruteforce: " + std::to_string(cells.size()) + " reachable cells with " +
                             std::to_string(m.n_actions) + " actions exceed the policy cap of " +
                             std::to_string(cap));

    AugmentedPolicy policy(m.horizon, m.n_states, aug.y_levels, m.n_actions);
    for (int t = 1; t <= m.horizon; ++t)
        for (int s = 0; s < m.n_states; ++s)
            for (int y = 0; y < aug.y_levels; ++y) policy.set_action(t, s, y, 0);

    std::vector<int> assignment(cells.size(), 0);
    bool have_best = false;
    double best_value = 0.0;
    AugmentedPolicy best_policy = policy;
    while (true) {
        double value = phi_quantile(evaluate_policy_distribution(aug, policy), g);
        if (!have_best || value > best_value) {  // strict: earlier lexicographic assignment wins ties
            have_best = true;
            best_value = value;
            best_policy = policy;
        }
        if (cells.empty()) break;
        // advance to the next assignment; the last cell varies fastest
        std::size_t pos = cells.size();
        bool advanced = false;
        while (pos > 0) {
            --pos;
            if (assignment[pos] + 1 < m.n_actions) {
                ++assignment[pos];
                policy.set_action(cells[pos].t, cells[pos].s, cells[pos].y, assignment[pos]);
                advanced = true;
                break;
            }
            assignment[pos] = 0;
            policy.set_action(cells[pos].t, cells[pos].s, cells[pos].y, 0);
        }
        if (!advanced) break;
    }
    return BruteForceResult{std::move(best_policy), best_value};
}

}  // namespace risklab
