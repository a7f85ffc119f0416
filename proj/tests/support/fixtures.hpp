#pragma once

#include <blackwell/mdp.hpp>

namespace blackwell::testing {

inline Rational rat(long num, long den = 1) { return rational(num, den); }

// Two states swapping deterministically, reward 1 in the first state:
// the stream from s1 is (1,0,1,0,...).
inline Mdp swap_mdp() {
  RawMdp raw;
  raw.states = {"s1", "s2"};
  raw.actions = {"go"};
  raw.transitions["go"] = {{"0", "1"}, {"1", "0"}};
  raw.rewards["go"] = {"1", "0"};
  return validate_mdp(raw);
}

// State 1 leaks into the absorbing state 2 with probability 1/2 per step:
// the stream from s1 is (1, 1/2, 1/4, ...).
inline Mdp absorbing_mdp() {
  RawMdp raw;
  raw.states = {"s1", "s2"};
  raw.actions = {"go"};
  raw.transitions["go"] = {{"1/2", "1/2"}, {"0", "1"}};
  raw.rewards["go"] = {"1", "0"};
  return validate_mdp(raw);
}

inline Mdp identity_mdp() {
  RawMdp raw;
  raw.states = {"s1", "s2"};
  raw.actions = {"stay"};
  raw.transitions["stay"] = {{"1", "0"}, {"0", "1"}};
  raw.rewards["stay"] = {"1", "0"};
  return validate_mdp(raw);
}

// One state, two actions: reward 1 vs reward 0, both self-loops.
inline Mdp one_state_two_actions_mdp() {
  RawMdp raw;
  raw.states = {"s1"};
  raw.actions = {"hi", "lo"};
  raw.transitions["hi"] = {{"1"}};
  raw.transitions["lo"] = {{"1"}};
  raw.rewards["hi"] = {"1"};
  raw.rewards["lo"] = {"0"};
  return validate_mdp(raw);
}

// At s1, action "cash" pays 1 once and absorbs into the worthless state;
// action "loop" stays at s1 paying 3/4 forever. The loop's gain 3/4 beats
// the one-shot payout's gain 0.
inline Mdp gain_vs_transient_mdp() {
  RawMdp raw;
  raw.states = {"s1", "s2"};
  raw.actions = {"cash", "loop"};
  raw.transitions["cash"] = {{"0", "1"}, {"0", "1"}};
  raw.transitions["loop"] = {{"1", "0"}, {"0", "1"}};
  raw.rewards["cash"] = {"1", "0"};
  raw.rewards["loop"] = {"3/4", "0"};
  return validate_mdp(raw);
}

inline DecisionRule only_rule(const Mdp& mdp) {
  return DecisionRule{std::vector<int>(mdp.num_states(), 0)};
}

}  // namespace blackwell::testing
