#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "blackwell/matrix.hpp"

namespace blackwell {

/// Unvalidated MDP description as read from an input file: names plus
/// rational-string entries ("1/3", "-2", "0"; decimals are not a thing here).
struct RawMdp {
  std::vector<std::string> states;
  std::vector<std::string> actions;
  std::map<std::string, std::vector<std::vector<std::string>>> transitions;
  std::map<std::string, std::vector<std::string>> rewards;
};

/// Validated finite MDP. Transition rows sum exactly to 1; rewards depend on
/// (state, action). Immutable after construction by convention.
struct Mdp {
  std::vector<std::string> states;
  std::vector<std::string> actions;
  std::vector<RatMatrix> transitions;  // one S x S matrix per action
  std::vector<RatVector> rewards;      // one length-S vector per action

  std::size_t num_states() const { return states.size(); }
  std::size_t num_actions() const { return actions.size(); }

  /// -1 when the name is unknown.
  int state_index(const std::string& name) const;
  int action_index(const std::string& name) const;

  Rational min_reward() const;
  Rational max_reward() const;
};

/// Checks every invariant with exact arithmetic and reports the first
/// violation with its coordinates. Throws ValidationError.
Mdp validate_mdp(const RawMdp& raw);

/// One action per state.
struct DecisionRule {
  std::vector<int> actions;

  bool operator==(const DecisionRule&) const = default;
  auto operator<=>(const DecisionRule&) const = default;
};

/// A policy: apply prefix rules once, then the cycle rules forever.
/// A stationary policy is prefix = {} and a one-rule cycle.
struct PolicySpec {
  std::vector<DecisionRule> prefix;
  std::vector<DecisionRule> cycle;

  static PolicySpec stationary(DecisionRule rule) { return {{}, {std::move(rule)}}; }
  bool is_stationary() const { return prefix.empty() && cycle.size() == 1; }

  /// Rule applied at 1-based time t.
  const DecisionRule& rule_at(std::int64_t t) const;
};

/// Throws ValidationError on an empty cycle or an out-of-range action.
void validate_policy(const Mdp& mdp, const PolicySpec& policy);

/// A reward stream defined implicitly by a Markov chain with per-state
/// rewards and a start state: u_t = [P^{t-1} r]_start.
struct StationaryStream {
  RatMatrix transition;
  RatVector reward;
  std::size_t start = 0;

  StationaryStream(RatMatrix p, RatVector r, std::size_t start_state);

  std::size_t num_states() const { return transition.rows(); }

  bool operator==(const StationaryStream&) const = default;
};

/// Q(f), R(f): row s comes from action f(s).
std::pair<RatMatrix, RatVector> rule_matrices(const Mdp& mdp, const DecisionRule& rule);

StationaryStream make_stationary_stream(const Mdp& mdp, const DecisionRule& rule,
                                        std::size_t start);

/// u_1..u_horizon for an arbitrary (eventually periodic) policy, computed by
/// forward row-vector products; matrix powers are never materialized.
RatVector generate_stream(const Mdp& mdp, const PolicySpec& policy, std::size_t start,
                          std::int64_t horizon);

inline constexpr std::uint64_t kDefaultRuleCap = 1'000'000;

/// All |A|^S decision rules in lexicographic order of the assignment vector.
/// Throws CapExceededError (naming |A|^S) past the cap.
std::vector<DecisionRule> enumerate_decision_rules(const Mdp& mdp,
                                                   std::uint64_t cap = kDefaultRuleCap);

/// Realizes an eventually periodic policy as a stationary stream on the
/// product of the state space with the policy's time phase. The product
/// chain generates exactly the same reward stream.
StationaryStream lift_policy(const Mdp& mdp, const PolicySpec& policy, std::size_t start);

/// Canonical single-line JSON for a validated MDP (stable key order, rational
/// strings). Suitable for digests and for replaying reported cases.
std::string to_mdp_json(const Mdp& mdp);

}  // namespace blackwell
