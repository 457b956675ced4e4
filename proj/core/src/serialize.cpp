#include "risklab/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "risklab/errors.hpp"

namespace risklab {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw DomainError(std::string("invalid JSON: ") + e.what());
    }
}

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw DomainError(std::string("malformed JSON document: ") + e.what());
    }
}

json distribution_to_value(const DiscreteDistribution& dist) {
    return json{{"grid", dist.grid()}, {"mass", dist.mass()}};
}

json policy_to_value(const AugmentedPolicy& p) {
    json tables = json::array();
    for (int t = 1; t <= p.horizon(); ++t) {
        json per_state = json::array();
        for (int s = 0; s < p.n_states(); ++s) {
            json per_y = json::array();
            for (int y = 0; y < p.y_levels(); ++y) {
                auto row = p.at(t, s, y);
                per_y.push_back(std::vector<double>(row.begin(), row.end()));
            }
            per_state.push_back(std::move(per_y));
        }
        tables.push_back(std::move(per_state));
    }
    return json{{"horizon", p.horizon()},
                {"n_states", p.n_states()},
                {"y_levels", p.y_levels()},
                {"n_actions", p.n_actions()},
                {"tables", std::move(tables)}};
}

AugmentedPolicy policy_from_value(const json& j) {
    AugmentedPolicy p(j.at("horizon").get<int>(), j.at("n_states").get<int>(), j.at("y_levels").get<int>(),
                      j.at("n_actions").get<int>());
    const json& tables = j.at("tables");
    for (int t = 1; t <= p.horizon(); ++t)
        for (int s = 0; s < p.n_states(); ++s)
            for (int y = 0; y < p.y_levels(); ++y) {
                std::vector<double> row =
                    tables.at(t - 1).at(s).at(y).get<std::vector<double>>();
                p.set(t, s, y, row);
            }
    return p;
}

}  // namespace

std::string to_json(const DiscreteDistribution& dist) { return distribution_to_value(dist).dump(); }

DiscreteDistribution distribution_from_json(const std::string& text) {
    json j = parse(text);
    return guarded([&] {
        return DiscreteDistribution(j.at("grid").get<std::vector<double>>(), j.at("mass").get<std::vector<double>>());
    });
}

std::string to_json(const WeightingFunction& weighting) {
    json j{{"kind", weighting.kind_name()}};
    switch (weighting.kind()) {
        case WeightingFunction::Kind::cvar:
        case WeightingFunction::Kind::var:
            j["alpha"] = weighting.alpha();
            break;
        case WeightingFunction::Kind::expectation:
            break;
        case WeightingFunction::Kind::piecewise_linear: {
            json knots = json::array();
            for (auto [t, v] : weighting.knots()) knots.push_back(json::array({t, v}));
            j["knots"] = std::move(knots);
            break;
        }
    }
    return j.dump();
}

WeightingFunction weighting_from_json(const std::string& text) {
    json j = parse(text);
    return guarded([&] {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "piecewise_linear") {
            std::vector<std::pair<double, double>> knots;
            for (const json& k : j.at("knots")) knots.push_back({k.at(0).get<double>(), k.at(1).get<double>()});
            return WeightingFunction::piecewise_linear(std::move(knots));
        }
        double alpha = j.contains("alpha") ? j.at("alpha").get<double>() : 0.0;
        return make_weighting(kind, alpha);
    });
}

std::string to_json(const TabularMdp& mdp) {
    json rewards = json::array();
    for (const auto& row : mdp.rewards) {
        json per_action = json::array();
        for (const LatticePmf& pmf : row) per_action.push_back(pmf.mass);
        rewards.push_back(std::move(per_action));
    }
    json j{{"n_states", mdp.n_states}, {"n_actions", mdp.n_actions}, {"T", mdp.horizon}, {"eta", mdp.eta},
           {"init", mdp.init},         {"trans", mdp.trans},         {"rewards", std::move(rewards)}};
    return j.dump();
}

TabularMdp mdp_from_json(const std::string& text) {
    json j = parse(text);
    return guarded([&] {
        TabularMdp m;
        m.n_states = j.at("n_states").get<int>();
        m.n_actions = j.at("n_actions").get<int>();
        m.horizon = j.at("T").get<int>();
        m.eta = j.at("eta").get<double>();
        m.init = j.at("init").get<std::vector<double>>();
        m.trans = j.at("trans").get<std::vector<std::vector<std::vector<double>>>>();
        for (const json& row : j.at("rewards")) {
            std::vector<LatticePmf> per_action;
            for (const json& masses : row) per_action.push_back(LatticePmf{masses.get<std::vector<double>>()});
            m.rewards.push_back(std::move(per_action));
        }
        m.validate();
        return m;
    });
}

std::string to_json(const AugmentedPolicy& policy) { return policy_to_value(policy).dump(); }

AugmentedPolicy policy_from_json(const std::string& text) {
    json j = parse(text);
    return guarded([&] {
        // accept either a bare policy or a plan result wrapping one
        if (j.contains("tables")) return policy_from_value(j);
        return policy_from_value(j.at("policy"));
    });
}

std::string to_json(const CvarPlanResult& result) {
    json j{{"policy", policy_to_value(result.policy)},
           {"rho_star", result.rho_star},
           {"value", result.value},
           {"alpha", result.alpha},
           {"eta", result.eta}};
    return j.dump();
}

std::string to_json(const CountsModel& counts) {
    json j{{"n_states", counts.n_states},
           {"n_actions", counts.n_actions},
           {"horizon", counts.horizon},
           {"eta", counts.eta},
           {"init", counts.init},
           {"reward_levels", counts.reward_levels},
           {"visits", counts.visits},
           {"transitions", counts.transitions},
           {"reward_hist", counts.reward_hist},
           {"episodes", counts.episodes}};
    return j.dump();
}

CountsModel counts_from_json(const std::string& text) {
    json j = parse(text);
    return guarded([&] {
        CountsModel c;
        c.n_states = j.at("n_states").get<int>();
        c.n_actions = j.at("n_actions").get<int>();
        c.horizon = j.at("horizon").get<int>();
        c.eta = j.at("eta").get<double>();
        c.init = j.at("init").get<std::vector<double>>();
        c.reward_levels = j.at("reward_levels").get<std::size_t>();
        c.visits = j.at("visits").get<std::vector<std::int64_t>>();
        c.transitions = j.at("transitions").get<std::vector<std::int64_t>>();
        c.reward_hist = j.at("reward_hist").get<std::vector<std::int64_t>>();
        c.episodes = j.at("episodes").get<std::int64_t>();
        c.validate();
        return c;
    });
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure: " + path);
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw IoError("write failure: " + path);
}

}  // namespace risklab
