#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "risklab/envs.hpp"
#include "risklab/mdp.hpp"

namespace risklab::cli {

/// Resolved input model: a built-in environment, a map file, or an MDP file.
/// reward_scale maps internal [0,1] rewards back to the environment's units.
struct EnvHandle {
    TabularMdp mdp;
    double reward_scale = 1.0;
    std::string name;
};

struct CommonOptions {
    std::string config_path;
    std::string env_name;   // "frozen-lake" or a catalogue member
    std::string mdp_path;   // JSON TabularMdp
    std::string map_path;   // ASCII frozen-lake map
    std::string out_dir = ".";
    double eta = 0.0;       // 0: the model's native lattice
};

struct PlanOptions {
    CommonOptions common;
    double alpha = 0.25;
};

struct EvalOptions {
    CommonOptions common;
    std::string policy_path;
    std::string weighting = "cvar";
    double alpha = 0.25;
};

struct LearnOptions {
    CommonOptions common;
    std::vector<double> alphas = {0.33};
    std::vector<std::string> modes = {"ucb"};
    std::vector<std::uint64_t> seeds = {1};
    std::int64_t episodes = 100;
    double delta = 0.1;
    std::string weighting = "cvar";
    double width_scale = 1.0;  // diagnostic; 1.0 is the analyzed construction
};

int run_plan(const PlanOptions& options);
int run_eval(const EvalOptions& options);
int run_learn(const LearnOptions& options);
int run_envs_list();

/// Full argv entry point: parses flags, merges --config, maps every error to
/// the documented JSON diagnostic and exit code (0 ok, 1 domain, 2 io).
int dispatch(int argc, const char* const* argv);

}  // namespace risklab::cli
