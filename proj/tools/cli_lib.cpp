#include "cli_lib.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "risklab/augment.hpp"
#include "risklab/errors.hpp"
#include "risklab/learner.hpp"
#include "risklab/planner.hpp"
#include "risklab/serialize.hpp"
#include "svg.hpp"

namespace risklab::cli {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

int worker_threads() {
    if (const char* env = std::getenv("RISKLAB_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    try {
        return json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw DomainError("config file " + path + " is not valid JSON: " + e.what());
    }
}

EnvHandle resolve_env(const CommonOptions& common, const json& config) {
    std::string env_name = common.env_name;
    std::string mdp_path = common.mdp_path;
    std::string map_path = common.map_path;
    json env_obj;
    if (config.contains("env")) {
        if (config["env"].is_string() && env_name.empty() && mdp_path.empty() && map_path.empty())
            env_name = config["env"].get<std::string>();
        else if (config["env"].is_object())
            env_obj = config["env"];
    }
    if (env_obj.contains("map_path") && map_path.empty() && env_name.empty() && mdp_path.empty())
        map_path = env_obj["map_path"].get<std::string>();
    if (config.contains("mdp_path") && mdp_path.empty() && env_name.empty() && map_path.empty())
        mdp_path = config["mdp_path"].get<std::string>();

    if (!mdp_path.empty()) {
        EnvHandle h{mdp_from_json(read_text_file(mdp_path)), 1.0, std::filesystem::path(mdp_path).stem().string()};
        return h;
    }
    if (!map_path.empty() || env_name == "frozen-lake" || (env_name.empty() && !env_obj.is_null())) {
        FrozenLakeSpec spec = FrozenLakeSpec::default_spec();
        if (!map_path.empty()) {
            std::istringstream lines(read_text_file(map_path));
            spec.map.clear();
            std::string line;
            while (std::getline(lines, line))
                if (!line.empty()) spec.map.push_back(line);
        }
        if (env_obj.contains("slip")) spec.slip = env_obj["slip"].get<double>();
        if (env_obj.contains("rewards")) spec.rewards = env_obj["rewards"].get<std::vector<double>>();
        if (env_obj.contains("T")) spec.horizon = env_obj["T"].get<int>();
        if (env_obj.contains("eta")) spec.eta = env_obj["eta"].get<double>();
        FrozenLake lake = make_frozen_lake(spec);
        return EnvHandle{std::move(lake.mdp), lake.reward_scale, "frozen-lake"};
    }
    if (env_name.empty()) env_name = "frozen-lake";
    if (env_name == "frozen-lake") {
        FrozenLake lake = make_frozen_lake(FrozenLakeSpec::default_spec());
        return EnvHandle{std::move(lake.mdp), lake.reward_scale, "frozen-lake"};
    }
    for (TestMdp& t : make_test_mdps())
        if (t.name == env_name) return EnvHandle{std::move(t.mdp), 1.0, t.name};
    throw DomainError("unknown environment: " + env_name + " (see `risklab envs list`)");
}

WeightingFunction resolve_weighting(const std::string& kind, double alpha) {
    if (kind == "cvar") return WeightingFunction::cvar(alpha);
    if (kind == "expectation") return WeightingFunction::expectation();
    if (kind == "var") return WeightingFunction::var(alpha);
    throw DomainError("unsupported weighting kind for this command: " + kind);
}

/// Cells actually visited by the policy, for the human-readable table.
std::vector<std::tuple<int, int, int>> policy_reachable_cells(const AugmentedMdp& aug,
                                                              const AugmentedPolicy& policy) {
    const TabularMdp& m = aug.base;
    int Y = aug.y_levels;
    std::vector<char> reach(static_cast<std::size_t>(m.n_states) * Y, 0);
    for (int s = 0; s < m.n_states; ++s)
        if (m.init[s] > 0.0) reach[static_cast<std::size_t>(s) * Y] = 1;
    std::vector<std::tuple<int, int, int>> cells;
    for (int t = 1; t <= m.horizon; ++t) {
        std::vector<char> next(reach.size(), 0);
        for (int s = 0; s < m.n_states; ++s)
            for (int y = 0; y < Y; ++y) {
                if (!reach[static_cast<std::size_t>(s) * Y + y]) continue;
                cells.push_back({t, s, y});
                auto row = policy.at(t, s, y);
                for (int a = 0; a < m.n_actions; ++a) {
                    if (row[a] <= 0.0) continue;
                    const LatticePmf& rp = m.rewards[s][a];
                    for (std::size_t r = 0; r < rp.mass.size(); ++r) {
                        if (rp.mass[r] <= 0.0) continue;
                        int y2 = std::min(y + static_cast<int>(r), Y - 1);
                        for (int s2 = 0; s2 < m.n_states; ++s2)
                            if (m.trans[s][a][s2] > 0.0) next[static_cast<std::size_t>(s2) * Y + y2] = 1;
                    }
                }
            }
        reach = std::move(next);
    }
    return cells;
}

struct LearnRunSpec {
    LearnerMode mode;
    WeightingFunction weighting;
    double alpha;  // for labels; 1.0 for expectation
    std::uint64_t seed;
    std::string label;
    std::string file_name;
};

// values in environment reward units (reward_scale times the internal ones)
std::string regret_csv(const RegretTrace& trace, double scale) {
    std::string out = "k,phi_true,phi_opt,regret_k,regret_cum\n";
    for (const RegretRow& row : trace.rows) {
        out += std::to_string(row.k);
        out += ',';
        out += fmt(row.phi_true * scale);
        out += ',';
        out += fmt(row.phi_opt * scale);
        out += ',';
        out += fmt(row.regret * scale);
        out += ',';
        out += fmt(row.regret_cum * scale);
        out += '\n';
    }
    return out;
}

}  // namespace

int run_plan(const PlanOptions& options) {
    json config = load_config(options.common.config_path);
    EnvHandle env = resolve_env(options.common, config);
    double eta = options.common.eta > 0.0 ? options.common.eta : env.mdp.eta;
    ensure_out_dir(options.common.out_dir);

    AugmentedMdp aug = build_augmented(env.mdp, eta);
    CvarPlanResult result = plan_cvar(aug, options.alpha);

    // report in environment units
    json out = json::parse(to_json(result));
    out["rho_star"] = result.rho_star * env.reward_scale;
    out["value"] = result.value * env.reward_scale;
    out["reward_scale"] = env.reward_scale;
    out["env"] = env.name;
    write_text_file(options.common.out_dir + "/plan.json", out.dump(2) + "\n");

    std::string table = "# plan for " + env.name + ", alpha=" + fmt(options.alpha) + ", eta=" + fmt(eta) + "\n";
    table += "# value=" + fmt(result.value * env.reward_scale) + " rho_star=" + fmt(result.rho_star * env.reward_scale) + "\n";
    table += "t\tstate\ty\taction\n";
    for (auto [t, s, y] : policy_reachable_cells(aug, result.policy)) {
        auto row = result.policy.at(t, s, y);
        int a = static_cast<int>(std::distance(row.begin(), std::max_element(row.begin(), row.end())));
        table += std::to_string(t) + "\t" + std::to_string(s) + "\t" +
                 fmt(static_cast<double>(y) * eta * env.reward_scale) + "\t" + std::to_string(a) + "\n";
    }
    write_text_file(options.common.out_dir + "/policy.txt", table);
    std::cout << "wrote " << options.common.out_dir << "/plan.json (value " << fmt(result.value * env.reward_scale)
              << ")\n";
    return 0;
}

int run_eval(const EvalOptions& options) {
    json config = load_config(options.common.config_path);
    EnvHandle env = resolve_env(options.common, config);
    double eta = options.common.eta > 0.0 ? options.common.eta : env.mdp.eta;
    if (options.policy_path.empty()) throw DomainError("eval: --policy is required");
    ensure_out_dir(options.common.out_dir);

    AugmentedPolicy policy = policy_from_json(read_text_file(options.policy_path));
    WeightingFunction g = resolve_weighting(options.weighting, options.alpha);

    AugmentedMdp aug = build_augmented(env.mdp, eta);
    DiscreteDistribution dist = evaluate_policy_distribution(aug, policy);
    double via_quantile = phi_quantile(dist, g) * env.reward_scale;
    double via_cdf = phi_cdf(dist, g) * env.reward_scale;

    std::vector<double> grid;
    for (double z : dist.grid()) grid.push_back(z * env.reward_scale);
    json out{{"distribution", {{"grid", grid}, {"mass", dist.mass()}}},
             {"phi_quantile", via_quantile},
             {"phi_cdf", via_cdf},
             {"abs_diff", std::abs(via_quantile - via_cdf)},
             {"weighting", json::parse(to_json(g))},
             {"reward_scale", env.reward_scale},
             {"env", env.name}};
    write_text_file(options.common.out_dir + "/eval.json", out.dump(2) + "\n");
    std::cout << "wrote " << options.common.out_dir << "/eval.json (phi " << fmt(via_quantile) << ")\n";
    return 0;
}

int run_learn(const LearnOptions& options) {
    json config = load_config(options.common.config_path);
    EnvHandle env = resolve_env(options.common, config);
    double eta = options.common.eta > 0.0 ? options.common.eta : env.mdp.eta;
    if (options.seeds.empty()) throw DomainError("learn: at least one seed is required");
    ensure_out_dir(options.common.out_dir);

    std::vector<LearnRunSpec> runs;
    for (const std::string& mode_name_str : options.modes) {
        LearnerMode mode = mode_from_name(mode_name_str);
        std::vector<double> alphas =
            options.weighting == "expectation" ? std::vector<double>{1.0} : options.alphas;
        for (double alpha : alphas) {
            WeightingFunction g =
                options.weighting == "expectation" ? WeightingFunction::expectation() : WeightingFunction::cvar(alpha);
            for (std::uint64_t seed : options.seeds) {
                std::string label = mode_name_str + " alpha=" + fmt(alpha);
                std::string file_name =
                    "trace_" + mode_name_str + "_alpha" + fmt(alpha) + "_seed" + std::to_string(seed) + ".csv";
                runs.push_back({mode, g, alpha, seed, label, file_name});
            }
        }
    }

    std::vector<RegretTrace> traces(runs.size());
    std::atomic<std::size_t> cursor{0};
    int n_workers = std::min<int>(worker_threads(), static_cast<int>(runs.size()));
    auto work = [&] {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= runs.size()) return;
            LearnerConfig cfg;
            cfg.episodes = options.episodes;
            cfg.delta = options.delta;
            cfg.eta = eta;
            cfg.weighting = runs[i].weighting;
            cfg.mode = runs[i].mode;
            cfg.seed = runs[i].seed;
            cfg.width_scale = options.width_scale;
            traces[i] = run_learning(env.mdp, cfg);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();

    json run_summaries = json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const RegretTrace& trace = traces[i];
        write_text_file(options.common.out_dir + "/" + runs[i].file_name, regret_csv(trace, env.reward_scale));

        std::int64_t late_total = 0, late_on_oracle_path = 0;
        int distinct = 0;
        for (const RegretRow& row : trace.rows) {
            distinct = std::max(distinct, row.policy_id + 1);
            if (row.k > options.episodes / 2) {
                ++late_total;
                if (row.max_return == trace.oracle_max_return) ++late_on_oracle_path;
            }
        }
        OptimismAudit audit = optimism_audit(trace);
        run_summaries.push_back(
            {{"config",
              {{"mode", mode_name(runs[i].mode)},
               {"alpha", runs[i].alpha},
               {"weighting", json::parse(to_json(runs[i].weighting))},
               {"seed", runs[i].seed},
               {"episodes", options.episodes},
               {"delta", options.delta},
               {"eta", eta},
               {"width_scale", options.width_scale}}},
             {"planning_objective", trace.planning_objective},
             {"phi_star", trace.phi_star * env.reward_scale},
             {"trace_file", runs[i].file_name},
             {"totals",
              {{"regret_cum", trace.final_cumulative_regret() * env.reward_scale},
               {"distinct_policies", distinct},
               {"optimism_violation_fraction", audit.violation_fraction},
               {"late_oracle_path_fraction",
                late_total ? static_cast<double>(late_on_oracle_path) / static_cast<double>(late_total) : 0.0}}}});
    }
    json summary{{"env", env.name},
                 {"reward_scale", env.reward_scale},
                 {"episodes", options.episodes},
                 {"delta", options.delta},
                 {"eta", eta},
                 {"runs", std::move(run_summaries)}};
    write_text_file(options.common.out_dir + "/summary.json", summary.dump(2) + "\n");

    // one chart per sweep: mean +- stdev of cumulative regret across seeds
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::vector<Series> series;
    std::size_t color_idx = 0;
    for (std::size_t i = 0; i < runs.size();) {
        std::size_t j = i;
        while (j < runs.size() && runs[j].label == runs[i].label) ++j;
        Series s;
        s.label = runs[i].label;
        s.color = kColors[color_idx++ % 6];
        std::size_t K = traces[i].rows.size();
        s.mean.resize(K);
        s.lower.resize(K);
        s.upper.resize(K);
        for (std::size_t k = 0; k < K; ++k) {
            double total = 0.0;
            for (std::size_t r = i; r < j; ++r) total += traces[r].rows[k].regret_cum;
            double mean = total / static_cast<double>(j - i) * env.reward_scale;
            double var = 0.0;
            for (std::size_t r = i; r < j; ++r) {
                double d = traces[r].rows[k].regret_cum * env.reward_scale - mean;
                var += d * d;
            }
            double sd = j - i > 1 ? std::sqrt(var / static_cast<double>(j - i - 1)) : 0.0;
            s.mean[k] = mean;
            s.lower[k] = mean - sd;
            s.upper[k] = mean + sd;
        }
        series.push_back(std::move(s));
        i = j;
    }
    write_text_file(options.common.out_dir + "/regret_curves.svg",
                    render_line_chart("cumulative regret on " + env.name, "episode", "cumulative regret", series));
    std::cout << "wrote " << runs.size() << " traces, summary.json and regret_curves.svg under "
              << options.common.out_dir << "\n";
    return 0;
}

int run_envs_list() {
    std::cout << "frozen-lake (9x9 cross, 4 corridors, slip 0.1, T=6)\n";
    for (const TestMdp& t : make_test_mdps())
        std::cout << t.name << " (S=" << t.mdp.n_states << " A=" << t.mdp.n_actions << " T=" << t.mdp.horizon
                  << " eta=" << fmt(t.mdp.eta) << ")\n";
    return 0;
}

namespace {

void emit_error(const std::string& kind, const std::string& message) {
    json j{{"error", {{"kind", kind}, {"message", message}}}};
    std::cout << j.dump() << "\n";
}

void add_common(CLI::App* cmd, CommonOptions& common) {
    cmd->add_option("--config", common.config_path, "JSON config file; flags override its fields");
    cmd->add_option("--env", common.env_name, "built-in environment name");
    cmd->add_option("--mdp", common.mdp_path, "tabular MDP JSON file");
    cmd->add_option("--map", common.map_path, "frozen-lake ASCII map file");
    cmd->add_option("--out", common.out_dir, "output directory");
    cmd->add_option("--eta", common.eta, "reward/threshold lattice step (default: the model's)");
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"tabular risk-sensitive reinforcement learning workbench"};
    app.require_subcommand(1);

    PlanOptions plan_options;
    CLI::App* plan_cmd = app.add_subcommand("plan", "compute the CVaR-optimal policy");
    add_common(plan_cmd, plan_options.common);
    plan_cmd->add_option("--alpha", plan_options.alpha, "CVaR tail level in (0,1]");

    EvalOptions eval_options;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a policy file exactly");
    add_common(eval_cmd, eval_options.common);
    eval_cmd->add_option("--policy", eval_options.policy_path, "policy JSON (or plan.json)");
    eval_cmd->add_option("--weighting", eval_options.weighting, "cvar | expectation | var");
    eval_cmd->add_option("--alpha", eval_options.alpha, "tail level for cvar/var");

    LearnOptions learn_options;
    CLI::App* learn_cmd = app.add_subcommand("learn", "run the episodic learners and record regret");
    add_common(learn_cmd, learn_options.common);
    learn_cmd->add_option("--alpha", learn_options.alphas, "CVaR level(s)")->delimiter(',');
    learn_cmd->add_option("--mode", learn_options.modes, "ucb | greedy | expected-ucb")->delimiter(',');
    learn_cmd->add_option("--seeds", learn_options.seeds, "root seeds, comma separated")->delimiter(',');
    learn_cmd->add_option("--episodes", learn_options.episodes, "episodes per run (K)");
    learn_cmd->add_option("--delta", learn_options.delta, "confidence parameter");
    learn_cmd->add_option("--weighting", learn_options.weighting, "cvar | expectation");
    learn_cmd->add_option("--width-scale", learn_options.width_scale,
                          "diagnostic multiplier on the confidence widths (default 1)");

    CLI::App* envs_cmd = app.add_subcommand("envs", "environment utilities");
    envs_cmd->require_subcommand(1);
    bool list_envs = false;
    CLI::App* list_cmd = envs_cmd->add_subcommand("list", "list built-in environments");
    list_cmd->callback([&] { list_envs = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("domain", std::string("argument error: ") + e.what());
        return 1;
    }

    try {
        // config may also carry the sweep lists when flags are omitted
        auto merge_learn_config = [&](LearnOptions& o) {
            json config = load_config(o.common.config_path);
            if (config.contains("alphas") && learn_cmd->count("--alpha") == 0)
                o.alphas = config["alphas"].get<std::vector<double>>();
            if (config.contains("modes") && learn_cmd->count("--mode") == 0)
                o.modes = config["modes"].get<std::vector<std::string>>();
            if (config.contains("seeds") && learn_cmd->count("--seeds") == 0)
                o.seeds = config["seeds"].get<std::vector<std::uint64_t>>();
            if (config.contains("episodes") && learn_cmd->count("--episodes") == 0)
                o.episodes = config["episodes"].get<std::int64_t>();
            if (config.contains("delta") && learn_cmd->count("--delta") == 0)
                o.delta = config["delta"].get<double>();
            if (config.contains("eta") && learn_cmd->count("--eta") == 0 && config["eta"].is_number())
                o.common.eta = config["eta"].get<double>();
            if (config.contains("width_scale") && learn_cmd->count("--width-scale") == 0)
                o.width_scale = config["width_scale"].get<double>();
            if (config.contains("weighting") && learn_cmd->count("--weighting") == 0 &&
                config["weighting"].is_object() && config["weighting"].contains("kind"))
                o.weighting = config["weighting"]["kind"].get<std::string>();
            if (config.contains("out") && learn_cmd->count("--out") == 0)
                o.common.out_dir = config["out"].get<std::string>();
        };

        if (plan_cmd->parsed()) return run_plan(plan_options);
        if (eval_cmd->parsed()) return run_eval(eval_options);
        if (learn_cmd->parsed()) {
            merge_learn_config(learn_options);
            return run_learn(learn_options);
        }
        if (envs_cmd->parsed() && list_envs) return run_envs_list();
        emit_error("domain", "no command given (try --help)");
        return 1;
    } catch (const IoError& e) {
        emit_error("io", e.what());
        return 2;
    } catch (const DomainError& e) {
        emit_error("domain", e.what());
        return 1;
    } catch (const ContractViolation& e) {
        emit_error("domain", e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error("domain", e.what());
        return 1;
    }
}

}  // namespace risklab::cli
