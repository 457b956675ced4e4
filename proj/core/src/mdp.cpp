#include "risklab/mdp.hpp"

#include <cmath>
#include <string>

#include "risklab/errors.hpp"
#include "risklab/rng.hpp"

namespace risklab {

namespace {
constexpr double kProbTolerance = 1e-12;

void check_probability_vector(const std::vector<double>& p, std::size_t expected, const char* what) {
    if (p.size() != expected) throw DomainError(std::string(what) + ": wrong length");
    double total = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw DomainError(std::string(what) + ": negative entry");
        total += v;
    }
    if (std::abs(total - 1.0) > kProbTolerance)
        throw DomainError(std::string(what) + ": sums to " + std::to_string(total));
}
}  // namespace

LatticePmf LatticePmf::point(std::size_t index, std::size_t size) {
    LatticePmf pmf;
    pmf.mass.assign(size, 0.0);
    pmf.mass.at(index) = 1.0;
    return pmf;
}

double LatticePmf::total() const {
    double acc = 0.0;
    for (double m : mass) acc += m;
    return acc;
}

void TabularMdp::validate() const {
    if (n_states < 1 || n_actions < 1 || horizon < 1) throw DomainError("mdp: sizes must be positive");
    if (!(eta > 0.0)) throw DomainError("mdp: eta must be positive");
    check_probability_vector(init, static_cast<std::size_t>(n_states), "mdp init");
    if (trans.size() != static_cast<std::size_t>(n_states) || rewards.size() != static_cast<std::size_t>(n_states))
        throw DomainError("mdp: table row count mismatch");
    for (int s = 0; s < n_states; ++s) {
        if (trans[s].size() != static_cast<std::size_t>(n_actions) ||
            rewards[s].size() != static_cast<std::size_t>(n_actions))
            throw DomainError("mdp: table column count mismatch");
        for (int a = 0; a < n_actions; ++a) {
            check_probability_vector(trans[s][a], static_cast<std::size_t>(n_states), "mdp transition row");
            const LatticePmf& r = rewards[s][a];
            if (r.mass.empty()) throw DomainError("mdp: empty reward pmf");
            for (double m : r.mass)
                if (!(m >= 0.0)) throw DomainError("mdp: negative reward mass");
            if (std::abs(r.total() - 1.0) > kProbTolerance) throw DomainError("mdp: reward pmf does not sum to 1");
            for (std::size_t i = 0; i < r.mass.size(); ++i)
                if (r.mass[i] > 0.0 && static_cast<double>(i) * eta > 1.0 + kProbTolerance)
                    throw DomainError("mdp: reward support above 1");
        }
    }
}

std::size_t TabularMdp::max_reward_index() const {
    std::size_t top = 0;
    for (const auto& row : rewards)
        for (const auto& pmf : row)
            for (std::size_t i = 0; i < pmf.mass.size(); ++i)
                if (pmf.mass[i] > 0.0 && i > top) top = i;
    return top;
}

double Episode::total_reward(double eta) const {
    long idx = 0;
    for (const auto& step : steps) idx += step.reward_index;
    return static_cast<double>(idx) * eta;
}

namespace {
std::vector<double> checked_action_probabilities(const TabularMdp& mdp, const HistoryPolicy& policy, int t,
                                                 const HistoryView& view) {
    std::vector<double> p = policy.action_probabilities(t, view);
    if (p.size() != static_cast<std::size_t>(mdp.n_actions))
        throw ContractViolation("policy returned wrong number of action probabilities");
    double total = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw ContractViolation("policy returned a negative action probability");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ContractViolation("policy action probabilities do not sum to 1");
    return p;
}
}  // namespace

Episode rollout(const TabularMdp& mdp, const HistoryPolicy& policy, std::uint64_t seed) {
    mdp.validate();
    rng::Stream stream(seed);
    Episode ep;
    ep.seed = seed;
    ep.steps.reserve(static_cast<std::size_t>(mdp.horizon));
    int state = static_cast<int>(stream.categorical(mdp.init));
    for (int t = 1; t <= mdp.horizon; ++t) {
        HistoryView view{std::span<const EpisodeStep>(ep.steps), state, mdp.eta};
        std::vector<double> p = checked_action_probabilities(mdp, policy, t, view);
        int action = static_cast<int>(stream.categorical(p));
        const LatticePmf& rp = mdp.rewards[state][action];
        int reward_index = static_cast<int>(stream.categorical(rp.mass));
        int next = static_cast<int>(stream.categorical(mdp.trans[state][action]));
        ep.steps.push_back({state, action, reward_index});
        state = next;
    }
    ep.final_state = state;
    return ep;
}

namespace {
struct Enumerator {
    const TabularMdp& mdp;
    const HistoryPolicy& policy;
    std::uint64_t cap;
    const std::function<void(int, std::span<const EpisodeStep>, int, int, double)>& visit;
    std::vector<EpisodeStep> steps;
    std::uint64_t leaves = 0;

    void walk(int t, int state, int cum_index, double prob) {
        visit(t, std::span<const EpisodeStep>(steps), state, cum_index, prob);
        if (t > mdp.horizon) {
            if (++leaves > cap)
                throw OracleTooLarge("oracle too large: trajectory enumeration exceeds cap of " +
                                     std::to_string(cap) + " episodes");
            return;
        }
        HistoryView view{std::span<const EpisodeStep>(steps), state, mdp.eta};
        std::vector<double> p = checked_action_probabilities(mdp, policy, t, view);
        for (int a = 0; a < mdp.n_actions; ++a) {
            if (p[a] <= 0.0) continue;
            const LatticePmf& rp = mdp.rewards[state][a];
            for (std::size_t ri = 0; ri < rp.mass.size(); ++ri) {
                if (rp.mass[ri] <= 0.0) continue;
                for (int s2 = 0; s2 < mdp.n_states; ++s2) {
                    double pt = mdp.trans[state][a][s2];
                    if (pt <= 0.0) continue;
                    steps.push_back({state, a, static_cast<int>(ri)});
                    walk(t + 1, s2, cum_index + static_cast<int>(ri), prob * p[a] * rp.mass[ri] * pt);
                    steps.pop_back();
                }
            }
        }
    }
};
}  // namespace

void enumerate_histories(
    const TabularMdp& mdp, const HistoryPolicy& policy, std::uint64_t cap,
    const std::function<void(int, std::span<const EpisodeStep>, int, int, double)>& visit) {
    mdp.validate();
    Enumerator en{mdp, policy, cap, visit, {}, 0};
    for (int s = 0; s < mdp.n_states; ++s) {
        if (mdp.init[s] <= 0.0) continue;
        en.walk(1, s, 0, mdp.init[s]);
    }
}

DiscreteDistribution exact_return_distribution(const TabularMdp& mdp, const HistoryPolicy& policy,
                                               std::uint64_t cap) {
    std::vector<double> mass(mdp.max_return_index() + 1, 0.0);
    enumerate_histories(mdp, policy, cap,
                        [&](int t, std::span<const EpisodeStep>, int, int cum_index, double prob) {
                            if (t == mdp.horizon + 1) mass[static_cast<std::size_t>(cum_index)] += prob;
                        });
    return DiscreteDistribution::from_lattice(mass, mdp.eta);
}

}  // namespace risklab
