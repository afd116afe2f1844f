#pragma once

#include <string>

#include "mdplab/errors.hpp"
#include "mdplab/mdp.hpp"

namespace mdplab {

/// On-disk format: a JSON object with fields n_states, n_actions,
/// transition ([x][a][y]), reward ([x][a]) and initial_dist ([x]).
/// Policies are stored as an object with a probs ([x][a]) field.
/// Loading re-validates all stochasticity invariants.

Mdp mdp_from_json_text(const std::string& text);
std::string mdp_to_json_text(const Mdp& mdp);
Mdp load_mdp(const std::string& path);
void save_mdp(const Mdp& mdp, const std::string& path);

Policy policy_from_json_text(const std::string& text);
std::string policy_to_json_text(const Policy& policy);
Policy load_policy(const std::string& path);
void save_policy(const Policy& policy, const std::string& path);

} // namespace mdplab
