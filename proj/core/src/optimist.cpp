#include "risklab/optimist.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "risklab/errors.hpp"

namespace risklab {

CountsModel CountsModel::for_mdp(const TabularMdp& mdp) {
    mdp.validate();
    double inv = 1.0 / mdp.eta;
    if (std::abs(inv - std::round(inv)) > 1e-9)
        throw DomainError("counts: 1/eta must be integral so the reward histogram covers [0,1]");
    CountsModel c;
    c.n_states = mdp.n_states;
    c.n_actions = mdp.n_actions;
    c.horizon = mdp.horizon;
    c.eta = mdp.eta;
    c.init = mdp.init;
    c.reward_levels = static_cast<std::size_t>(std::llround(inv)) + 1;
    std::size_t rows = static_cast<std::size_t>(c.n_states) * c.n_actions;
    c.visits.assign(rows, 0);
    c.transitions.assign(rows * static_cast<std::size_t>(c.n_states), 0);
    c.reward_hist.assign(rows * c.reward_levels, 0);
    return c;
}

void CountsModel::validate() const {
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            std::size_t k = index(s, a);
            std::int64_t trans_total = 0, reward_total = 0;
            for (int s2 = 0; s2 < n_states; ++s2) {
                std::int64_t v = transitions[k * n_states + s2];
                if (v < 0) throw DomainError("counts: negative transition count");
                trans_total += v;
            }
            for (std::size_t r = 0; r < reward_levels; ++r) {
                std::int64_t v = reward_hist[k * reward_levels + r];
                if (v < 0) throw DomainError("counts: negative reward count");
                reward_total += v;
            }
            if (visits[k] != trans_total || visits[k] != reward_total)
                throw DomainError("counts: N(s,a) disagrees with row totals");
        }
    }
}

void update_counts(CountsModel& counts, const Episode& episode) {
    if (episode.steps.empty()) throw DomainError("update_counts: empty episode");
    for (std::size_t i = 0; i < episode.steps.size(); ++i) {
        const EpisodeStep& step = episode.steps[i];
        int next = (i + 1 < episode.steps.size()) ? episode.steps[i + 1].state : episode.final_state;
        if (step.state < 0 || step.state >= counts.n_states || next < 0 || next >= counts.n_states ||
            step.action < 0 || step.action >= counts.n_actions || step.reward_index < 0 ||
            static_cast<std::size_t>(step.reward_index) >= counts.reward_levels)
            throw DomainError("update_counts: episode does not match the counts' model shape");
        std::size_t k = counts.index(step.state, step.action);
        counts.visits[k] += 1;
        counts.transitions[k * counts.n_states + next] += 1;
        counts.reward_hist[k * counts.reward_levels + static_cast<std::size_t>(step.reward_index)] += 1;
    }
    counts.episodes += 1;
}

ConfidenceWidths confidence_widths(const CountsModel& counts, std::int64_t total_episodes, double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("confidence_widths: delta must lie in (0,1]");
    if (total_episodes < 1) throw DomainError("confidence_widths: K must be at least 1");
    double S = static_cast<double>(counts.n_states);
    double A = static_cast<double>(counts.n_actions);
    double log_term = std::log(6.0 * S * A * static_cast<double>(total_episodes) / delta);
    std::size_t rows = static_cast<std::size_t>(counts.n_states) * counts.n_actions;
    ConfidenceWidths w;
    w.eps_p.assign(rows, std::numeric_limits<double>::infinity());
    w.eps_r.assign(rows, std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < rows; ++k) {
        std::int64_t n = counts.visits[k];
        if (n == 0) continue;  // +infinity sentinel: maximal optimism
        double nd = static_cast<double>(n);
        w.eps_p[k] = std::sqrt(2.0 * S / nd * log_term);
        w.eps_r[k] = std::sqrt(log_term / (2.0 * nd));
    }
    return w;
}

EmpiricalModel empirical_model(const CountsModel& counts) {
    counts.validate();
    EmpiricalModel out;
    TabularMdp& m = out.mdp;
    m.n_states = counts.n_states;
    m.n_actions = counts.n_actions;
    m.horizon = counts.horizon;
    m.eta = counts.eta;
    m.init = counts.init;
    m.trans.assign(static_cast<std::size_t>(counts.n_states),
                   std::vector<std::vector<double>>(static_cast<std::size_t>(counts.n_actions)));
    m.rewards.assign(static_cast<std::size_t>(counts.n_states),
                     std::vector<LatticePmf>(static_cast<std::size_t>(counts.n_actions)));
    out.visited.assign(static_cast<std::size_t>(counts.n_states) * counts.n_actions, 0);

    for (int s = 0; s < counts.n_states; ++s) {
        for (int a = 0; a < counts.n_actions; ++a) {
            std::size_t k = counts.index(s, a);
            std::vector<double> row(static_cast<std::size_t>(counts.n_states));
            LatticePmf pmf;
            pmf.mass.assign(counts.reward_levels, 0.0);
            std::int64_t n = counts.visits[k];
            if (n > 0) {
                out.visited[k] = 1;
                for (int s2 = 0; s2 < counts.n_states; ++s2)
                    row[static_cast<std::size_t>(s2)] =
                        static_cast<double>(counts.transitions[k * counts.n_states + s2]) / static_cast<double>(n);
                for (std::size_t r = 0; r < counts.reward_levels; ++r)
                    pmf.mass[r] =
                        static_cast<double>(counts.reward_hist[k * counts.reward_levels + r]) / static_cast<double>(n);
            } else {
                // placeholder until visited: uniform transitions, zero reward
                std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(counts.n_states));
                pmf.mass[0] = 1.0;
            }
            m.trans[s][a] = std::move(row);
            m.rewards[s][a] = std::move(pmf);
        }
    }
    m.validate();
    return out;
}

OptimisticModel optimistic_model(const EmpiricalModel& empirical, const ConfidenceWidths& widths) {
    const TabularMdp& e = empirical.mdp;
    std::size_t rows = static_cast<std::size_t>(e.n_states) * e.n_actions;
    if (widths.eps_p.size() != rows || widths.eps_r.size() != rows)
        throw DomainError("optimistic_model: widths shaped differently from the model");
    double inv = 1.0 / e.eta;
    if (std::abs(inv - std::round(inv)) > 1e-9)
        throw DomainError("optimistic_model: 1/eta must be integral");
    std::size_t reward_levels = static_cast<std::size_t>(std::llround(inv)) + 1;
    std::size_t top_reward = reward_levels - 1;  // lattice index of r = 1

    OptimisticModel out;
    out.s_inf = e.n_states;
    out.widths = widths;
    TabularMdp& m = out.mdp;
    int S1 = e.n_states + 1;
    m.n_states = S1;
    m.n_actions = e.n_actions;
    m.horizon = e.horizon;
    m.eta = e.eta;
    m.init.assign(static_cast<std::size_t>(S1), 0.0);
    for (int s = 0; s < e.n_states; ++s) m.init[s] = e.init[s];
    m.trans.assign(static_cast<std::size_t>(S1), std::vector<std::vector<double>>(static_cast<std::size_t>(m.n_actions)));
    m.rewards.assign(static_cast<std::size_t>(S1), std::vector<LatticePmf>(static_cast<std::size_t>(m.n_actions)));

    for (int s = 0; s < e.n_states; ++s) {
        for (int a = 0; a < e.n_actions; ++a) {
            std::size_t k = static_cast<std::size_t>(s) * e.n_actions + a;
            std::vector<double> row(static_cast<std::size_t>(S1), 0.0);
            LatticePmf pmf;
            pmf.mass.assign(reward_levels, 0.0);
            if (!empirical.is_visited(s, a)) {
                // N = 0: the clamped formulas' limit — everything to s_inf
                row[static_cast<std::size_t>(out.s_inf)] = 1.0;
                pmf.mass[top_reward] = 1.0;
            } else {
                double eps = widths.eps_r[k];
                double kept = 0.0;
                for (int s2 = 0; s2 < e.n_states; ++s2) {
                    double p = std::max(e.trans[s][a][s2] - eps, 0.0);
                    row[static_cast<std::size_t>(s2)] = p;
                    kept += p;
                }
                row[static_cast<std::size_t>(out.s_inf)] = std::max(1.0 - kept, 0.0);

                // reward CDF shifted down by eps, clamped at 0, forced to 1 at r = 1
                const LatticePmf& er = e.rewards[s][a];
                double cum = 0.0, prev = 0.0;
                for (std::size_t r = 0; r < reward_levels; ++r) {
                    cum += (r < er.mass.size()) ? er.mass[r] : 0.0;
                    double shifted = (r == top_reward) ? 1.0 : std::max(std::min(cum, 1.0) - eps, 0.0);
                    pmf.mass[r] = shifted - prev;
                    prev = shifted;
                }
            }
            m.trans[s][a] = std::move(row);
            m.rewards[s][a] = std::move(pmf);
        }
    }
    // s_inf: self-loop, reward 1 with probability one
    for (int a = 0; a < m.n_actions; ++a) {
        std::vector<double> row(static_cast<std::size_t>(S1), 0.0);
        row[static_cast<std::size_t>(out.s_inf)] = 1.0;
        m.trans[out.s_inf][a] = std::move(row);
        m.rewards[out.s_inf][a] = LatticePmf::point(top_reward, reward_levels);
    }
    m.validate();
    return out;
}

}  // namespace risklab
