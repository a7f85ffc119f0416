#include "mdp_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace blackwell::cli {

namespace {

using nlohmann::json;

std::string entry_to_string(const json& value, const std::string& where) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer())
    return std::to_string(value.get<long long>());
  if (value.is_number_float())
    throw ValidationError("decimals rejected; use p/q (" + where + ")");
  throw ValidationError("expected a rational string at " + where);
}

std::vector<std::string> string_list(const json& value, const std::string& where) {
  if (!value.is_array()) throw ValidationError("expected a list at " + where);
  std::vector<std::string> out;
  for (const auto& item : value) out.push_back(entry_to_string(item, where));
  return out;
}

}  // namespace

RawMdp load_raw_mdp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open \"" + path + "\"");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in \"" + path + "\": " + e.what());
  }
  if (!doc.is_object()) throw ValidationError("top level of \"" + path + "\" must be an object");

  RawMdp raw;
  if (!doc.contains("states")) throw ValidationError("missing key \"states\"");
  if (!doc.contains("actions")) throw ValidationError("missing key \"actions\"");
  if (!doc.contains("transitions")) throw ValidationError("missing key \"transitions\"");
  if (!doc.contains("rewards")) throw ValidationError("missing key \"rewards\"");

  for (const auto& s : doc["states"]) {
    if (!s.is_string()) throw ValidationError("state names must be strings");
    raw.states.push_back(s.get<std::string>());
  }
  for (const auto& a : doc["actions"]) {
    if (!a.is_string()) throw ValidationError("action names must be strings");
    raw.actions.push_back(a.get<std::string>());
  }

  if (!doc["transitions"].is_object())
    throw ValidationError("\"transitions\" must map actions to row lists");
  for (const auto& [action, rows] : doc["transitions"].items()) {
    if (!rows.is_array())
      throw ValidationError("transitions for action " + action + " must be a list of rows");
    std::vector<std::vector<std::string>> parsed;
    std::size_t row_index = 1;
    for (const auto& row : rows) {
      parsed.push_back(string_list(row, "transitions[" + action + "] row " +
                                            std::to_string(row_index)));
      ++row_index;
    }
    raw.transitions[action] = std::move(parsed);
  }

  if (!doc["rewards"].is_object())
    throw ValidationError("\"rewards\" must map actions to reward lists");
  for (const auto& [action, vec] : doc["rewards"].items())
    raw.rewards[action] = string_list(vec, "rewards[" + action + "]");

  return raw;
}

std::string describe_error(const RawMdp& raw, const ValidationError& error) {
  std::ostringstream out;
  out << error.what();
  std::string located;
  if (error.state >= 1 && error.state <= static_cast<int>(raw.states.size()))
    located += "state " + raw.states[static_cast<std::size_t>(error.state - 1)];
  if (error.column >= 1 && error.column <= static_cast<int>(raw.states.size())) {
    if (!located.empty()) located += " -> ";
    located += "state " + raw.states[static_cast<std::size_t>(error.column - 1)];
  }
  if (!error.action.empty()) {
    if (!located.empty()) located += ", ";
    located += "action " + error.action;
  }
  if (!located.empty()) out << " [" << located << "]";
  return out.str();
}

std::string mdp_digest(const Mdp& mdp) {
  const std::string canonical = to_mdp_json(mdp);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return std::string("fnv1a:") + buffer;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      out.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  out.push_back(current);
  return out;
}

DecisionRule parse_rule(const Mdp& mdp, const std::string& text) {
  const auto names = split(text, ',');
  if (names.size() != mdp.num_states())
    throw ValidationError("rule \"" + text + "\" assigns " + std::to_string(names.size()) +
                          " actions, expected one per state (" +
                          std::to_string(mdp.num_states()) + ")");
  DecisionRule rule;
  for (const auto& name : names) {
    const int index = mdp.action_index(name);
    if (index < 0) throw ValidationError("unknown action \"" + name + "\" in rule \"" + text + "\"");
    rule.actions.push_back(index);
  }
  return rule;
}

}  // namespace

PolicySpec parse_policy(const Mdp& mdp, const std::string& text) {
  const auto bar = text.find('|');
  PolicySpec policy;
  if (bar == std::string::npos) {
    policy = PolicySpec::stationary(parse_rule(mdp, text));
  } else {
    const std::string prefix_part = text.substr(0, bar);
    const std::string cycle_part = text.substr(bar + 1);
    if (!prefix_part.empty())
      for (const auto& rule_text : split(prefix_part, ';'))
        policy.prefix.push_back(parse_rule(mdp, rule_text));
    if (cycle_part.empty())
      throw ValidationError("policy \"" + text + "\" has an empty cycle");
    for (const auto& rule_text : split(cycle_part, ';'))
      policy.cycle.push_back(parse_rule(mdp, rule_text));
  }
  validate_policy(mdp, policy);
  return policy;
}

PolicySpec default_policy(const Mdp& mdp) {
  if (mdp.num_actions() != 1)
    throw ValidationError("--policy is required: the MDP has " +
                          std::to_string(mdp.num_actions()) + " actions");
  return PolicySpec::stationary(DecisionRule{std::vector<int>(mdp.num_states(), 0)});
}

std::string rule_to_string(const Mdp& mdp, const DecisionRule& rule) {
  std::string out;
  for (std::size_t s = 0; s < rule.actions.size(); ++s) {
    if (s) out += ",";
    out += mdp.actions[static_cast<std::size_t>(rule.actions[s])];
  }
  return out;
}

std::string policy_to_string(const Mdp& mdp, const PolicySpec& policy) {
  if (policy.is_stationary()) return rule_to_string(mdp, policy.cycle.front());
  std::string out;
  for (std::size_t i = 0; i < policy.prefix.size(); ++i) {
    if (i) out += ";";
    out += rule_to_string(mdp, policy.prefix[i]);
  }
  out += "|";
  for (std::size_t i = 0; i < policy.cycle.size(); ++i) {
    if (i) out += ";";
    out += rule_to_string(mdp, policy.cycle[i]);
  }
  return out;
}

std::size_t state_index_or_throw(const Mdp& mdp, const std::string& name) {
  const int index = mdp.state_index(name);
  if (index >= 0) return static_cast<std::size_t>(index);
  std::string known;
  for (std::size_t s = 0; s < mdp.num_states(); ++s) {
    if (s) known += ", ";
    known += mdp.states[s];
  }
  throw ValidationError("unknown state \"" + name + "\" (known states: " + known + ")");
}

}  // namespace blackwell::cli
