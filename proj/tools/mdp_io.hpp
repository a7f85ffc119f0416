#pragma once

#include <cstdint>
#include <string>

#include <blackwell/mdp.hpp>

namespace blackwell::cli {

/// Loads and parses an MDP description file (JSON with rational-string
/// entries). Throws ValidationError with a user-facing message; JSON numbers
/// with a fractional part are rejected to keep the exactness contract.
RawMdp load_raw_mdp(const std::string& path);

/// Formats a validation error with state/action names resolved against the
/// raw description.
std::string describe_error(const RawMdp& raw, const ValidationError& error);

/// FNV-1a over the canonical JSON form; stable across runs.
std::string mdp_digest(const Mdp& mdp);

/// "a,b" (one action name per state) for stationary rules;
/// "rule;rule|rule;rule" with '|' separating prefix from cycle for eventually
/// periodic policies. "|rule" is an empty prefix.
PolicySpec parse_policy(const Mdp& mdp, const std::string& text);

/// The lexicographically first rule when the MDP has a single action;
/// otherwise a policy is required and this throws.
PolicySpec default_policy(const Mdp& mdp);

std::string policy_to_string(const Mdp& mdp, const PolicySpec& policy);
std::string rule_to_string(const Mdp& mdp, const DecisionRule& rule);

/// Resolves a state name; throws with the list of known names.
std::size_t state_index_or_throw(const Mdp& mdp, const std::string& name);

}  // namespace blackwell::cli
