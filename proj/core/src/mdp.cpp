#include "blackwell/mdp.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace blackwell {

namespace {

Rational parse_entry(const std::string& text, const std::string& action, int state,
                     int column) {
  if (text.find('.') != std::string::npos)
    throw ValidationError("decimals rejected; use p/q (got \"" + text + "\")", action, state,
                          column);
  auto value = parse_rational(text);
  if (!value)
    throw ValidationError("bad rational \"" + text + "\"", action, state, column);
  return *value;
}

}  // namespace

int Mdp::state_index(const std::string& name) const {
  auto it = std::find(states.begin(), states.end(), name);
  return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

int Mdp::action_index(const std::string& name) const {
  auto it = std::find(actions.begin(), actions.end(), name);
  return it == actions.end() ? -1 : static_cast<int>(it - actions.begin());
}

Rational Mdp::min_reward() const {
  Rational best = rewards.front().front();
  for (const auto& vec : rewards)
    for (const auto& r : vec) best = std::min(best, r);
  return best;
}

Rational Mdp::max_reward() const {
  Rational best = rewards.front().front();
  for (const auto& vec : rewards)
    for (const auto& r : vec) best = std::max(best, r);
  return best;
}

Mdp validate_mdp(const RawMdp& raw) {
  if (raw.states.empty()) throw ValidationError("states must be nonempty");
  if (raw.actions.empty()) throw ValidationError("actions must be nonempty");

  std::set<std::string> seen;
  for (const auto& s : raw.states)
    if (!seen.insert(s).second) throw ValidationError("duplicate state name \"" + s + "\"");
  seen.clear();
  for (const auto& a : raw.actions)
    if (!seen.insert(a).second) throw ValidationError("duplicate action name \"" + a + "\"");

  const std::size_t S = raw.states.size();
  Mdp mdp;
  mdp.states = raw.states;
  mdp.actions = raw.actions;

  for (const auto& action : raw.actions) {
    auto t_it = raw.transitions.find(action);
    if (t_it == raw.transitions.end())
      throw ValidationError("missing transition matrix for action " + action, action);
    const auto& rows = t_it->second;
    if (rows.size() != S)
      throw ValidationError("transition matrix for action " + action + " has " +
                                std::to_string(rows.size()) + " rows, expected " +
                                std::to_string(S),
                            action);

    RatMatrix matrix(S, S);
    for (std::size_t r = 0; r < S; ++r) {
      if (rows[r].size() != S)
        throw ValidationError("transition row " + std::to_string(r + 1) + " for action " +
                                  action + " has " + std::to_string(rows[r].size()) +
                                  " entries, expected " + std::to_string(S),
                              action, static_cast<int>(r + 1));
      for (std::size_t c = 0; c < S; ++c)
        matrix(r, c) = parse_entry(rows[r][c], action, static_cast<int>(r + 1),
                                   static_cast<int>(c + 1));

      // Negativity first, then the exact row sum; entries <= 1 follow.
      for (std::size_t c = 0; c < S; ++c)
        if (matrix(r, c) < 0)
          throw ValidationError("negative probability at (" + std::to_string(r + 1) + "," +
                                    std::to_string(c + 1) + ")",
                                action, static_cast<int>(r + 1), static_cast<int>(c + 1));
      Rational sum;
      for (std::size_t c = 0; c < S; ++c) sum += matrix(r, c);
      if (sum != 1)
        throw ValidationError("row sum " + to_string(sum) + " != 1 at state " +
                                  std::to_string(r + 1),
                              action, static_cast<int>(r + 1));
    }

    auto r_it = raw.rewards.find(action);
    if (r_it == raw.rewards.end())
      throw ValidationError("missing reward vector for action " + action, action);
    if (r_it->second.size() != S)
      throw ValidationError("reward vector for action " + action + " has " +
                                std::to_string(r_it->second.size()) + " entries, expected " +
                                std::to_string(S),
                            action);
    RatVector reward(S);
    for (std::size_t s = 0; s < S; ++s)
      reward[s] = parse_entry(r_it->second[s], action, static_cast<int>(s + 1), -1);

    mdp.transitions.push_back(std::move(matrix));
    mdp.rewards.push_back(std::move(reward));
  }

  for (const auto& [action, _] : raw.transitions)
    if (std::find(raw.actions.begin(), raw.actions.end(), action) == raw.actions.end())
      throw ValidationError("transition matrix for unknown action " + action, action);
  for (const auto& [action, _] : raw.rewards)
    if (std::find(raw.actions.begin(), raw.actions.end(), action) == raw.actions.end())
      throw ValidationError("reward vector for unknown action " + action, action);

  return mdp;
}

const DecisionRule& PolicySpec::rule_at(std::int64_t t) const {
  const auto m = static_cast<std::int64_t>(prefix.size());
  if (t <= m) return prefix[static_cast<std::size_t>(t - 1)];
  return cycle[static_cast<std::size_t>((t - m - 1) % static_cast<std::int64_t>(cycle.size()))];
}

void validate_policy(const Mdp& mdp, const PolicySpec& policy) {
  if (policy.cycle.empty()) throw ValidationError("policy cycle must be nonempty");
  auto check_rule = [&](const DecisionRule& rule) {
    if (rule.actions.size() != mdp.num_states())
      throw ValidationError("decision rule has " + std::to_string(rule.actions.size()) +
                            " entries, expected " + std::to_string(mdp.num_states()));
    for (std::size_t s = 0; s < rule.actions.size(); ++s)
      if (rule.actions[s] < 0 || rule.actions[s] >= static_cast<int>(mdp.num_actions()))
        throw ValidationError("decision rule uses an unknown action at state " +
                                  std::to_string(s + 1),
                              {}, static_cast<int>(s + 1));
  };
  for (const auto& rule : policy.prefix) check_rule(rule);
  for (const auto& rule : policy.cycle) check_rule(rule);
}

StationaryStream::StationaryStream(RatMatrix p, RatVector r, std::size_t start_state)
    : transition(std::move(p)), reward(std::move(r)), start(start_state) {
  if (!is_stochastic(transition))
    throw ValidationError("stream transition matrix is not stochastic");
  if (reward.size() != transition.rows())
    throw ValidationError("stream reward vector has wrong length");
  if (start >= transition.rows()) throw ValidationError("stream start state out of range");
}

std::pair<RatMatrix, RatVector> rule_matrices(const Mdp& mdp, const DecisionRule& rule) {
  validate_policy(mdp, PolicySpec::stationary(rule));
  const std::size_t S = mdp.num_states();
  RatMatrix matrix(S, S);
  RatVector reward(S);
  for (std::size_t s = 0; s < S; ++s) {
    const auto a = static_cast<std::size_t>(rule.actions[s]);
    for (std::size_t c = 0; c < S; ++c) matrix(s, c) = mdp.transitions[a](s, c);
    reward[s] = mdp.rewards[a][s];
  }
  return {std::move(matrix), std::move(reward)};
}

StationaryStream make_stationary_stream(const Mdp& mdp, const DecisionRule& rule,
                                        std::size_t start) {
  if (start >= mdp.num_states()) throw ValidationError("start state out of range");
  auto [matrix, reward] = rule_matrices(mdp, rule);
  return StationaryStream(std::move(matrix), std::move(reward), start);
}

RatVector generate_stream(const Mdp& mdp, const PolicySpec& policy, std::size_t start,
                          std::int64_t horizon) {
  validate_policy(mdp, policy);
  if (start >= mdp.num_states()) throw ValidationError("start state out of range");
  if (horizon < 1) throw ValidationError("horizon must be >= 1");

  // Row vector e_start * Q(f_1) ... Q(f_{t-1}); u_t = row . R(f_t).
  RatVector row(mdp.num_states());
  row[start] = 1;
  RatVector out;
  out.reserve(static_cast<std::size_t>(horizon));
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const DecisionRule& rule = policy.rule_at(t);
    Rational u;
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
      if (row[s] == 0) continue;
      u += row[s] * mdp.rewards[static_cast<std::size_t>(rule.actions[s])][s];
    }
    out.push_back(std::move(u));
    if (t == horizon) break;
    // Advance by the rule's transition matrix, row by row of actions.
    RatVector next(mdp.num_states());
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
      if (row[s] == 0) continue;
      const auto& matrix = mdp.transitions[static_cast<std::size_t>(rule.actions[s])];
      for (std::size_t c = 0; c < mdp.num_states(); ++c) {
        if (matrix(s, c) == 0) continue;
        next[c] += row[s] * matrix(s, c);
      }
    }
    row = std::move(next);
  }
  return out;
}

std::vector<DecisionRule> enumerate_decision_rules(const Mdp& mdp, std::uint64_t cap) {
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();

  BigInt total;
  mpz_ui_pow_ui(total.get_mpz_t(), static_cast<unsigned long>(A),
                static_cast<unsigned long>(S));
  if (total > BigInt(static_cast<unsigned long>(cap)))
    throw CapExceededError("rule enumeration cap exceeded: |A|^S = " + total.get_str() +
                               " > " + std::to_string(cap),
                           total);

  std::vector<DecisionRule> rules;
  rules.reserve(total.get_ui());
  DecisionRule current{std::vector<int>(S, 0)};
  while (true) {
    rules.push_back(current);
    // Odometer increment, most significant digit first: lexicographic order.
    std::size_t pos = S;
    while (pos > 0) {
      --pos;
      if (current.actions[pos] + 1 < static_cast<int>(A)) {
        ++current.actions[pos];
        std::fill(current.actions.begin() + static_cast<std::ptrdiff_t>(pos) + 1,
                  current.actions.end(), 0);
        break;
      }
      if (pos == 0) return rules;
    }
  }
}

StationaryStream lift_policy(const Mdp& mdp, const PolicySpec& policy, std::size_t start) {
  validate_policy(mdp, policy);
  if (start >= mdp.num_states()) throw ValidationError("start state out of range");

  const std::size_t S = mdp.num_states();
  const std::size_t m = policy.prefix.size();
  const std::size_t L = policy.cycle.size();
  const std::size_t phases = m + L;

  auto rule_of_phase = [&](std::size_t ph) -> const DecisionRule& {
    return ph < m ? policy.prefix[ph] : policy.cycle[ph - m];
  };
  auto next_phase = [&](std::size_t ph) {
    return ph + 1 < m + L ? ph + 1 : m;  // wrap back to the cycle start
  };
  auto index_of = [&](std::size_t s, std::size_t ph) { return s * phases + ph; };

  RatMatrix p(S * phases, S * phases);
  RatVector r(S * phases);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t ph = 0; ph < phases; ++ph) {
      const DecisionRule& rule = rule_of_phase(ph);
      const auto a = static_cast<std::size_t>(rule.actions[s]);
      r[index_of(s, ph)] = mdp.rewards[a][s];
      for (std::size_t s2 = 0; s2 < S; ++s2) {
        const Rational& prob = mdp.transitions[a](s, s2);
        if (prob == 0) continue;
        p(index_of(s, ph), index_of(s2, next_phase(ph))) = prob;
      }
    }
  }
  return StationaryStream(std::move(p), std::move(r), index_of(start, 0));
}

std::string to_mdp_json(const Mdp& mdp) {
  std::ostringstream out;
  auto emit_string_list = [&](const std::vector<std::string>& items) {
    out << "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out << ",";
      out << '"' << items[i] << '"';
    }
    out << "]";
  };
  out << "{\"states\":";
  emit_string_list(mdp.states);
  out << ",\"actions\":";
  emit_string_list(mdp.actions);
  out << ",\"transitions\":{";
  for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
    if (a) out << ",";
    out << '"' << mdp.actions[a] << "\":[";
    for (std::size_t r = 0; r < mdp.num_states(); ++r) {
      if (r) out << ",";
      out << "[";
      for (std::size_t c = 0; c < mdp.num_states(); ++c) {
        if (c) out << ",";
        out << '"' << to_string(mdp.transitions[a](r, c)) << '"';
      }
      out << "]";
    }
    out << "]";
  }
  out << "},\"rewards\":{";
  for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
    if (a) out << ",";
    out << '"' << mdp.actions[a] << "\":[";
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
      if (s) out << ",";
      out << '"' << to_string(mdp.rewards[a][s]) << '"';
    }
    out << "]";
  }
  out << "}}";
  return out.str();
}

}  // namespace blackwell
