#include "risklab/augment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "risklab/errors.hpp"

namespace risklab {

AugmentedPolicy::AugmentedPolicy(int horizon, int n_states, int y_levels, int n_actions)
    : horizon_(horizon), n_states_(n_states), y_levels_(y_levels), n_actions_(n_actions) {
    if (horizon < 1 || n_states < 1 || y_levels < 1 || n_actions < 1)
        throw DomainError("augmented policy: sizes must be positive");
    data_.assign(static_cast<std::size_t>(horizon) * n_states * y_levels * n_actions,
                 1.0 / static_cast<double>(n_actions));
}

AugmentedPolicy AugmentedPolicy::uniform(int horizon, int n_states, int y_levels, int n_actions) {
    return AugmentedPolicy(horizon, n_states, y_levels, n_actions);
}

AugmentedPolicy AugmentedPolicy::constant(int horizon, int n_states, int y_levels, int n_actions, int action) {
    AugmentedPolicy p(horizon, n_states, y_levels, n_actions);
    for (int t = 1; t <= horizon; ++t)
        for (int s = 0; s < n_states; ++s)
            for (int y = 0; y < y_levels; ++y) p.set_action(t, s, y, action);
    return p;
}

std::size_t AugmentedPolicy::offset(int t, int s, int y) const {
    if (t < 1 || t > horizon_ || s < 0 || s >= n_states_ || y < 0 || y >= y_levels_)
        throw DomainError("augmented policy: cell (" + std::to_string(t) + "," + std::to_string(s) + "," +
                          std::to_string(y) + ") out of range");
    return ((static_cast<std::size_t>(t - 1) * n_states_ + s) * y_levels_ + y) * n_actions_;
}

std::span<const double> AugmentedPolicy::at(int t, int s, int y) const {
    return std::span<const double>(data_.data() + offset(t, s, y), static_cast<std::size_t>(n_actions_));
}

void AugmentedPolicy::set(int t, int s, int y, std::span<const double> probs) {
    if (probs.size() != static_cast<std::size_t>(n_actions_))
        throw DomainError("augmented policy: wrong action vector length");
    std::copy(probs.begin(), probs.end(), data_.begin() + static_cast<std::ptrdiff_t>(offset(t, s, y)));
}

void AugmentedPolicy::set_action(int t, int s, int y, int action) {
    if (action < 0 || action >= n_actions_) throw DomainError("augmented policy: action out of range");
    std::size_t base = offset(t, s, y);
    for (int a = 0; a < n_actions_; ++a) data_[base + a] = (a == action) ? 1.0 : 0.0;
}

std::optional<std::vector<std::int8_t>> AugmentedPolicy::deterministic_actions() const {
    std::vector<std::int8_t> actions;
    actions.reserve(data_.size() / static_cast<std::size_t>(n_actions_));
    for (std::size_t base = 0; base < data_.size(); base += static_cast<std::size_t>(n_actions_)) {
        int hot = -1;
        for (int a = 0; a < n_actions_; ++a) {
            double v = data_[base + a];
            if (v == 1.0 && hot < 0)
                hot = a;
            else if (v != 0.0)
                return std::nullopt;
        }
        if (hot < 0) return std::nullopt;
        actions.push_back(static_cast<std::int8_t>(hot));
    }
    return actions;
}

AugmentedPolicy AugmentedPolicy::with_states(int new_n_states) const {
    AugmentedPolicy out(horizon_, new_n_states, y_levels_, n_actions_);
    int copy_states = std::min(n_states_, new_n_states);
    for (int t = 1; t <= horizon_; ++t)
        for (int s = 0; s < copy_states; ++s)
            for (int y = 0; y < y_levels_; ++y) out.set(t, s, y, at(t, s, y));
    return out;
}

int lattice_ratio(double eta, double base_eta) {
    if (!(eta > 0.0)) throw DomainError("eta must be positive");
    double ratio = eta / base_eta;
    double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9)
        throw DomainError("eta = " + std::to_string(eta) + " is not an integer multiple of the reward lattice " +
                          std::to_string(base_eta));
    double inv = 1.0 / eta;
    if (std::abs(inv - std::round(inv)) > 1e-9)
        throw DomainError("1/eta must be an integer so rounded-up rewards stay in [0,1]; got eta = " +
                          std::to_string(eta));
    return static_cast<int>(rounded);
}

TabularMdp discretize_rewards(const TabularMdp& mdp, double eta) {
    mdp.validate();
    int ratio = lattice_ratio(eta, mdp.eta);
    TabularMdp out = mdp;
    out.eta = eta;
    std::size_t top = static_cast<std::size_t>(std::llround(1.0 / eta));
    for (auto& row : out.rewards) {
        for (auto& pmf : row) {
            std::vector<double> pushed(top + 1, 0.0);
            for (std::size_t i = 0; i < pmf.mass.size(); ++i) {
                if (pmf.mass[i] <= 0.0) continue;
                // phi(i * base_eta) = ceil(i / ratio) * eta, exact in integers
                std::size_t j = (i + static_cast<std::size_t>(ratio) - 1) / static_cast<std::size_t>(ratio);
                pushed.at(j) += pmf.mass[i];
            }
            pmf.mass = std::move(pushed);
        }
    }
    out.validate();
    return out;
}

AugmentedMdp build_augmented(const TabularMdp& mdp, double eta) {
    AugmentedMdp aug;
    aug.base = discretize_rewards(mdp, eta);
    aug.eta = eta;
    aug.y_levels = static_cast<int>(std::llround(1.0 / eta)) * mdp.horizon + 1;
    return aug;
}

AdaptedPolicy::AdaptedPolicy(AugmentedPolicy policy, double eta) : policy_(std::move(policy)), eta_(eta) {
    if (!(eta_ > 0.0)) throw DomainError("adapt_policy: eta must be positive");
}

std::vector<double> AdaptedPolicy::action_probabilities(int t, const HistoryView& history) const {
    int ratio = lattice_ratio(eta_, history.eta);
    long y = 0;
    for (const EpisodeStep& step : history.steps) {
        if (step.reward_index < 0 || static_cast<double>(step.reward_index) * history.eta > 1.0 + 1e-12)
            throw ContractViolation("adapted policy observed a reward outside [0,1]");
        y += (static_cast<long>(step.reward_index) + ratio - 1) / ratio;  // per-step round-up
    }
    if (y >= policy_.y_levels()) throw ContractViolation("adapted policy: cumulative reward out of lattice range");
    auto row = policy_.at(t, history.current_state, static_cast<int>(y));
    return std::vector<double>(row.begin(), row.end());
}

AdaptedPolicy adapt_policy(AugmentedPolicy policy, double eta) { return AdaptedPolicy(std::move(policy), eta); }

AugmentedPolicy build_tilde_policy(const TabularMdp& mdp, const HistoryPolicy& policy, std::uint64_t cap) {
    mdp.validate();
    lattice_ratio(mdp.eta, mdp.eta);  // validates 1/eta integral
    // same y range as build_augmented(mdp, mdp.eta) so tables line up
    int y_levels = static_cast<int>(std::llround(1.0 / mdp.eta)) * mdp.horizon + 1;
    int T = mdp.horizon;
    int S = mdp.n_states;
    int A = mdp.n_actions;

    // weight[cell] = P(Xi_t in cell), acc[cell][a] = E[pi(a | Xi_t); cell]
    std::vector<double> weight(static_cast<std::size_t>(T) * S * y_levels, 0.0);
    std::vector<double> acc(weight.size() * static_cast<std::size_t>(A), 0.0);
    auto cell_of = [&](int t, int s, int y) {
        return (static_cast<std::size_t>(t - 1) * S + s) * y_levels + y;
    };

    enumerate_histories(mdp, policy, cap,
                        [&](int t, std::span<const EpisodeStep> steps, int state, int cum_index, double prob) {
                            if (t > T) return;
                            std::size_t cell = cell_of(t, state, cum_index);
                            weight[cell] += prob;
                            HistoryView view{steps, state, mdp.eta};
                            std::vector<double> p = policy.action_probabilities(t, view);
                            for (int a = 0; a < A; ++a) acc[cell * A + a] += prob * p[a];
                        });

    AugmentedPolicy tilde(T, S, y_levels, A);
    std::vector<double> row(static_cast<std::size_t>(A));
    for (int t = 1; t <= T; ++t)
        for (int s = 0; s < S; ++s)
            for (int y = 0; y < y_levels; ++y) {
                std::size_t cell = cell_of(t, s, y);
                if (weight[cell] <= 0.0) continue;  // unreachable cells stay uniform
                for (int a = 0; a < A; ++a) row[static_cast<std::size_t>(a)] = acc[cell * A + a] / weight[cell];
                tilde.set(t, s, y, row);
            }
    return tilde;
}

}  // namespace risklab
