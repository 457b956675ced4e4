#pragma once

#include <string>

#include "risklab/augment.hpp"
#include "risklab/distribution.hpp"
#include "risklab/mdp.hpp"
#include "risklab/optimist.hpp"
#include "risklab/planner.hpp"
#include "risklab/weighting.hpp"

namespace risklab {

// JSON wire formats (field names are part of the interface):
//   distribution   {"grid": [...], "mass": [...]}
//   weighting      {"kind": "cvar", "alpha": 0.25} | {"kind": "expectation"}
//                  | {"kind": "var", "alpha": ...}
//                  | {"kind": "piecewise_linear", "knots": [[tau, v], ...]}
//   mdp            {"n_states", "n_actions", "T", "eta", "init", "trans",
//                   "rewards"} with rewards as lattice-index histograms
//   policy         {"horizon", "n_states", "y_levels", "n_actions",
//                   "tables"} dense [t][s][y][action]
//   plan result    {"policy", "rho_star", "value", "alpha", "eta"}
//   counts         checkpoint of every count table plus the episode index

std::string to_json(const DiscreteDistribution& dist);
DiscreteDistribution distribution_from_json(const std::string& text);

std::string to_json(const WeightingFunction& weighting);
WeightingFunction weighting_from_json(const std::string& text);

std::string to_json(const TabularMdp& mdp);
TabularMdp mdp_from_json(const std::string& text);

std::string to_json(const AugmentedPolicy& policy);
AugmentedPolicy policy_from_json(const std::string& text);

std::string to_json(const CvarPlanResult& result);

std::string to_json(const CountsModel& counts);
CountsModel counts_from_json(const std::string& text);

/// Whole-file IO; throws IoError on filesystem problems.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace risklab
