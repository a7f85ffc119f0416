#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include <blackwell/axioms.hpp>
#include <blackwell/ordering.hpp>

#include "mdp_io.hpp"

using namespace blackwell;
using nlohmann::json;

namespace {

struct LoadedMdp {
  std::string path;
  RawMdp raw;
  Mdp mdp;
  std::string digest;
};

LoadedMdp load_mdp(const std::string& path) {
  LoadedMdp out;
  out.path = path;
  out.raw = cli::load_raw_mdp(path);
  try {
    out.mdp = validate_mdp(out.raw);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + cli::describe_error(out.raw, e));
  }
  out.digest = cli::mdp_digest(out.mdp);
  return out;
}

PolicySpec policy_or_default(const Mdp& mdp, const std::string& text) {
  return text.empty() ? cli::default_policy(mdp) : cli::parse_policy(mdp, text);
}

/// "path:state" with the state name after the last colon.
std::pair<std::string, std::string> split_path_state(const std::string& text) {
  const auto pos = text.rfind(':');
  if (pos == std::string::npos || pos + 1 == text.size())
    throw ValidationError("expected \"path:state\", got \"" + text + "\"");
  return {text.substr(0, pos), text.substr(pos + 1)};
}

json rationals_to_json(const std::vector<Rational>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

json cesaro_to_json(const CesaroResult& c) {
  switch (c.kind) {
    case CesaroResult::Kind::diverges_plus:
      return {{"kind", "diverges"}, {"sign", "+"}};
    case CesaroResult::Kind::diverges_minus:
      return {{"kind", "diverges"}, {"sign", "-"}};
    case CesaroResult::Kind::value:
      return {{"kind", "value"}, {"value", to_string(c.value)}};
  }
  return {};
}

std::string cesaro_to_text(const CesaroResult& c) {
  switch (c.kind) {
    case CesaroResult::Kind::diverges_plus:
      return "diverges to +infinity";
    case CesaroResult::Kind::diverges_minus:
      return "diverges to -infinity";
    case CesaroResult::Kind::value:
      return "value " + to_string(c.value);
  }
  return {};
}

void emit(const json& machine, const std::string& human, bool machine_format) {
  if (machine_format)
    std::cout << machine.dump() << "\n";
  else
    std::cout << human;
}

constexpr double kOracleBetas[] = {0.9, 0.99, 0.999, 0.9999};
constexpr std::int64_t kOracleNs[] = {1000, 10000, 100000};

int cmd_validate(const std::string& path, bool machine_format) {
  const LoadedMdp loaded = load_mdp(path);
  json machine = {{"command", "validate"},
                  {"path", path},
                  {"digest", loaded.digest},
                  {"states", loaded.mdp.num_states()},
                  {"actions", loaded.mdp.num_actions()},
                  {"valid", true}};
  std::string human = "valid: " + std::to_string(loaded.mdp.num_states()) + " states, " +
                      std::to_string(loaded.mdp.num_actions()) + " actions, digest " +
                      loaded.digest + "\n";
  emit(machine, human, machine_format);
  return 0;
}

int cmd_stream(const std::string& path, const std::string& policy_text,
               const std::string& state_name, std::int64_t horizon, bool machine_format) {
  const LoadedMdp loaded = load_mdp(path);
  const PolicySpec policy = policy_or_default(loaded.mdp, policy_text);
  const std::size_t state = cli::state_index_or_throw(loaded.mdp, state_name);
  const RatVector values = generate_stream(loaded.mdp, policy, state, horizon);

  json machine = {{"command", "stream"},
                  {"digest", loaded.digest},
                  {"policy", cli::policy_to_string(loaded.mdp, policy)},
                  {"state", state_name},
                  {"horizon", horizon},
                  {"values", rationals_to_json(values)}};
  std::string human;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) human += " ";
    human += to_string(values[i]);
  }
  human += "\n";
  emit(machine, human, machine_format);
  return 0;
}

Decomposition decompose_with_retry(const StationaryStream& stream, std::int64_t horizon) {
  if (horizon > 0) return decompose(stream, horizon);
  std::int64_t h = default_decompose_horizon(stream);
  for (int attempt = 0;; ++attempt) {
    try {
      return decompose(stream, h);
    } catch (const CertificateError&) {
      if (attempt >= 4) throw;
      h *= 2;
    }
  }
}

int cmd_decompose(const std::string& path, const std::string& policy_text,
                  const std::string& state_name, std::int64_t horizon, bool machine_format) {
  const LoadedMdp loaded = load_mdp(path);
  const PolicySpec policy = policy_or_default(loaded.mdp, policy_text);
  const std::size_t state = cli::state_index_or_throw(loaded.mdp, state_name);
  const StationaryStream stream = lift_policy(loaded.mdp, policy, state);
  const Decomposition d = decompose_with_retry(stream, horizon);

  const std::size_t shown = std::min<std::size_t>(d.tail.size(), 16);
  std::vector<Rational> tail_head(d.tail.begin(),
                                  d.tail.begin() + static_cast<std::ptrdiff_t>(shown));

  json machine = {{"command", "decompose"},
                  {"digest", loaded.digest},
                  {"policy", cli::policy_to_string(loaded.mdp, policy)},
                  {"state", state_name},
                  {"period", d.period},
                  {"cycle", rationals_to_json(d.periodic_part.cycle())},
                  {"tail_samples", rationals_to_json(tail_head)},
                  {"sampled_horizon", d.tail.size()},
                  {"decay_ratio", to_string(d.decay_ratio)},
                  {"onset", d.onset}};

  std::string human = "period: " + std::to_string(d.period) + "\ncycle:";
  for (const auto& c : d.periodic_part.cycle()) human += " " + to_string(c);
  human += "\ntail[1.." + std::to_string(shown) + "]:";
  for (const auto& x : tail_head) human += " " + to_string(x);
  human += "\ncertificate: q=" + to_string(d.decay_ratio) +
           " onset=" + std::to_string(d.onset) + " (sampled horizon " +
           std::to_string(d.tail.size()) + ")\n";
  emit(machine, human, machine_format);
  return 0;
}

int cmd_compare(const std::string& lhs_arg, const std::string& rhs_arg,
                const std::string& policy_a, const std::string& policy_b,
                const std::string& criterion, bool with_oracle, bool machine_format) {
  const auto [path_a, state_a] = split_path_state(lhs_arg);
  const auto [path_b, state_b] = split_path_state(rhs_arg);
  const LoadedMdp a = load_mdp(path_a);
  const LoadedMdp b = path_b == path_a ? a : load_mdp(path_b);
  const PolicySpec pa = policy_or_default(a.mdp, policy_a);
  const PolicySpec pb = policy_or_default(b.mdp, policy_b);
  const StationaryStream u = lift_policy(a.mdp, pa, cli::state_index_or_throw(a.mdp, state_a));
  const StationaryStream v = lift_policy(b.mdp, pb, cli::state_index_or_throw(b.mdp, state_b));

  const bool run_blackwell = criterion == "blackwell" || criterion == "both";
  const bool run_overtaking = criterion == "avg-overtaking" || criterion == "both";

  json results = json::array();
  std::string human = "compare " + path_a + ":" + state_a + " (policy " +
                      cli::policy_to_string(a.mdp, pa) + ") vs " + path_b + ":" + state_b +
                      " (policy " + cli::policy_to_string(b.mdp, pb) + ")\n";

  if (run_blackwell) {
    const CompareReport report = blackwell_compare(u, v);
    const LaurentSignature sig = laurent_signature(u, v);
    json record = {{"criterion", "blackwell"},
                   {"result", to_string(report.result)},
                   {"signature", rationals_to_json(sig.coefficients)}};
    if (const auto lead = sig.leading_index()) record["leading_index"] = *lead;
    results.push_back(record);
    human += "blackwell: " + std::string(to_string(report.result)) + "\n  signature";
    for (std::size_t i = 0; i < sig.coefficients.size(); ++i)
      human += " a[" + std::to_string(static_cast<int>(i) - 1) +
               "]=" + to_string(sig.coefficients[i]);
    human += "\n";
  }
  if (run_overtaking) {
    const CompareReport report = avg_overtaking_compare(u, v);
    json record = {{"criterion", "avg-overtaking"},
                   {"result", to_string(report.result)},
                   {"cesaro", cesaro_to_json(*report.cesaro)}};
    results.push_back(record);
    human += "avg-overtaking: " + std::string(to_string(report.result)) + "\n  cesaro " +
             cesaro_to_text(*report.cesaro) + "\n";
  }

  json oracles = json::array();
  if (with_oracle) {
    std::vector<OracleSample> discounted_samples;
    std::vector<OracleSample> overtaking_samples;
    for (double beta : kOracleBetas)
      discounted_samples.push_back({beta, oracle_discounted(u, v, beta)});
    for (std::int64_t n : kOracleNs)
      overtaking_samples.push_back(
          {static_cast<double>(n), oracle_avg_overtaking(u, v, n)});

    human += "oracles:\n";
    for (const auto& sample : discounted_samples) {
      oracles.push_back(
          {{"kind", "discounted"}, {"beta", sample.parameter}, {"value", sample.value}});
      human += "  discounted beta=" + std::to_string(sample.parameter) + " -> " +
               std::to_string(sample.value) + "\n";
    }
    for (const auto& sample : overtaking_samples) {
      oracles.push_back({{"kind", "overtaking"},
                         {"n", static_cast<std::int64_t>(sample.parameter)},
                         {"value", sample.value}});
      human += "  overtaking n=" + std::to_string(static_cast<std::int64_t>(sample.parameter)) +
               " -> " + std::to_string(sample.value) + "\n";
    }
  }

  json machine = {{"command", "compare"},
                  {"lhs", {{"path", path_a}, {"state", state_a}, {"digest", a.digest},
                           {"policy", cli::policy_to_string(a.mdp, pa)}}},
                  {"rhs", {{"path", path_b}, {"state", state_b}, {"digest", b.digest},
                           {"policy", cli::policy_to_string(b.mdp, pb)}}},
                  {"results", results}};
  if (with_oracle) machine["oracles"] = oracles;
  emit(machine, human, machine_format);
  return 0;
}

int cmd_optimal(const std::string& path, const std::string& state_name, bool all_states,
                bool verbose, bool machine_format) {
  const LoadedMdp loaded = load_mdp(path);
  std::vector<DecisionRule> maximal;
  if (all_states) {
    maximal = find_blackwell_optimal_all_states(loaded.mdp);
  } else {
    maximal = find_blackwell_optimal(loaded.mdp, cli::state_index_or_throw(loaded.mdp, state_name));
  }

  json machine = {{"command", "optimal"},
                  {"digest", loaded.digest},
                  {"mode", all_states ? "all-states" : "state " + state_name}};
  json rules = json::array();
  std::string human;
  for (const auto& rule : maximal) {
    rules.push_back(cli::rule_to_string(loaded.mdp, rule));
    human += cli::rule_to_string(loaded.mdp, rule) + "\n";
  }
  machine["maximal_rules"] = rules;

  if (verbose) {
    json table = json::array();
    human += "values (gain, constant term) per rule and state:\n";
    for (const auto& rule : enumerate_decision_rules(loaded.mdp)) {
      const RuleValue value = rule_value(loaded.mdp, rule);
      json row = {{"rule", cli::rule_to_string(loaded.mdp, rule)}};
      json cells = json::array();
      human += "  " + cli::rule_to_string(loaded.mdp, rule) + ":";
      for (std::size_t s = 0; s < loaded.mdp.num_states(); ++s) {
        cells.push_back({{"state", loaded.mdp.states[s]},
                         {"gain", to_string(value.gain[s])},
                         {"constant", to_string(value.abel_constant[s])}});
        human += " " + loaded.mdp.states[s] + "=(" + to_string(value.gain[s]) + ", " +
                 to_string(value.abel_constant[s]) + ")";
      }
      human += "\n";
      row["values"] = cells;
      table.push_back(row);
    }
    machine["table"] = table;
  }
  emit(machine, human, machine_format);
  return 0;
}

int cmd_axioms(std::uint64_t seed, std::int64_t cases, const std::string& suite,
               const std::string& ordering, bool machine_format) {
  SuiteConfig config;
  config.seed = seed;
  config.cases = cases;
  config.suite = suite;
  config.ordering = ordering;
  const auto reports = run_suites(config);

  bool any_failure = false;
  json machine_reports = json::array();
  std::string human;
  for (const auto& report : reports) {
    any_failure = any_failure || !report.passed();
    json record = {{"suite", report.suite},
                   {"ordering", report.ordering},
                   {"cases", report.cases},
                   {"failures", report.failures}};
    machine_reports.push_back(record);
    human += report.suite + "[" + report.ordering + "]: " + std::to_string(report.cases) +
             " cases, " + std::to_string(report.failures.size()) + " failures\n";
    const std::size_t shown = std::min<std::size_t>(report.failures.size(), 5);
    for (std::size_t i = 0; i < shown; ++i) human += "    " + report.failures[i] + "\n";
    if (report.failures.size() > shown)
      human += "    ... " + std::to_string(report.failures.size() - shown) + " more\n";
  }
  human += any_failure ? "FAIL\n" : "OK\n";

  json machine = {{"command", "axioms"},
                  {"seed", seed},
                  {"cases", cases},
                  {"suite", suite},
                  {"ordering", ordering},
                  {"reports", machine_reports},
                  {"passed", !any_failure}};
  emit(machine, human, machine_format);
  return any_failure ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact reward-stream analysis for finite MDPs: stream generation, periodic "
               "decomposition, discount-limit and average-overtaking orders, optimal-rule "
               "search, and property suites for the order axioms."};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "human";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"human", "machine"}));

  int exit_code = 0;

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Check an MDP description file");
  auto validate_path = std::make_shared<std::string>();
  validate_cmd->add_option("path", *validate_path, "MDP file")->required();
  validate_cmd->callback(
      [&, validate_path] { exit_code = cmd_validate(*validate_path, format == "machine"); });

  // stream
  auto* stream_cmd = app.add_subcommand("stream", "Print the expected-reward stream");
  auto stream_path = std::make_shared<std::string>();
  auto stream_policy = std::make_shared<std::string>();
  auto stream_state = std::make_shared<std::string>();
  auto stream_horizon = std::make_shared<std::int64_t>(16);
  stream_cmd->add_option("path", *stream_path, "MDP file")->required();
  stream_cmd->add_option("--policy", *stream_policy,
                         "Rule \"a,b\" or \"prefix|cycle\" rule lists (';' separates rules)");
  stream_cmd->add_option("--state", *stream_state, "Start state name")->required();
  stream_cmd->add_option("--horizon", *stream_horizon, "Number of entries (default 16)");
  stream_cmd->callback([&, stream_path, stream_policy, stream_state, stream_horizon] {
    exit_code = cmd_stream(*stream_path, *stream_policy, *stream_state, *stream_horizon,
                           format == "machine");
  });

  // decompose
  auto* decompose_cmd =
      app.add_subcommand("decompose", "Split a policy stream into periodic part plus tail");
  auto dec_path = std::make_shared<std::string>();
  auto dec_policy = std::make_shared<std::string>();
  auto dec_state = std::make_shared<std::string>();
  auto dec_horizon = std::make_shared<std::int64_t>(0);
  decompose_cmd->add_option("path", *dec_path, "MDP file")->required();
  decompose_cmd->add_option("--policy", *dec_policy, "Policy (as in stream)");
  decompose_cmd->add_option("--state", *dec_state, "Start state name")->required();
  decompose_cmd->add_option("--horizon", *dec_horizon,
                            "Sampling horizon (default: automatic with retry)");
  decompose_cmd->callback([&, dec_path, dec_policy, dec_state, dec_horizon] {
    exit_code = cmd_decompose(*dec_path, *dec_policy, *dec_state, *dec_horizon,
                              format == "machine");
  });

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "Order two policy streams");
  auto cmp_lhs = std::make_shared<std::string>();
  auto cmp_rhs = std::make_shared<std::string>();
  auto cmp_policy_a = std::make_shared<std::string>();
  auto cmp_policy_b = std::make_shared<std::string>();
  auto cmp_criterion = std::make_shared<std::string>("both");
  auto cmp_oracle = std::make_shared<bool>(false);
  compare_cmd->add_option("lhs", *cmp_lhs, "path:state of the left stream")->required();
  compare_cmd->add_option("rhs", *cmp_rhs, "path:state of the right stream")->required();
  compare_cmd->add_option("--policy-a", *cmp_policy_a, "Policy for the left stream");
  compare_cmd->add_option("--policy-b", *cmp_policy_b, "Policy for the right stream");
  compare_cmd->add_option("--criterion", *cmp_criterion, "Which order to decide")
      ->check(CLI::IsMember({"blackwell", "avg-overtaking", "both"}));
  compare_cmd->add_flag("--oracle", *cmp_oracle, "Add float cross-checks");
  compare_cmd->callback([&, cmp_lhs, cmp_rhs, cmp_policy_a, cmp_policy_b, cmp_criterion,
                         cmp_oracle] {
    exit_code = cmd_compare(*cmp_lhs, *cmp_rhs, *cmp_policy_a, *cmp_policy_b, *cmp_criterion,
                            *cmp_oracle, format == "machine");
  });

  // optimal
  auto* optimal_cmd = app.add_subcommand("optimal", "List discount-order-maximal rules");
  auto opt_path = std::make_shared<std::string>();
  auto opt_state = std::make_shared<std::string>();
  auto opt_all = std::make_shared<bool>(false);
  auto opt_verbose = std::make_shared<bool>(false);
  optimal_cmd->add_option("path", *opt_path, "MDP file")->required();
  auto* opt_state_option = optimal_cmd->add_option("--state", *opt_state, "Start state name");
  auto* opt_all_flag =
      optimal_cmd->add_flag("--all-states", *opt_all, "Require maximality at every state");
  opt_state_option->excludes(opt_all_flag);
  optimal_cmd->add_flag("--verbose", *opt_verbose, "Print per-rule values");
  optimal_cmd->callback([&, opt_path, opt_state, opt_all, opt_verbose] {
    if (!*opt_all && opt_state->empty())
      throw ValidationError("optimal requires --state <name> or --all-states");
    exit_code = cmd_optimal(*opt_path, *opt_state, *opt_all, *opt_verbose,
                            format == "machine");
  });

  // axioms
  auto* axioms_cmd = app.add_subcommand("axioms", "Run the order-axiom property suites");
  auto ax_seed = std::make_shared<std::uint64_t>(42);
  auto ax_cases = std::make_shared<std::int64_t>(200);
  auto ax_suite = std::make_shared<std::string>("all");
  auto ax_ordering = std::make_shared<std::string>("both");
  axioms_cmd->add_option("--seed", *ax_seed, "Generator seed (default 42)");
  axioms_cmd->add_option("--cases", *ax_cases, "Cases per suite (default 200)");
  axioms_cmd->add_option("--suite", *ax_suite, "Suite to run")
      ->check(CLI::IsMember({"a1", "a2", "a3", "theorem1", "all"}));
  // Test hook: swap in a planted faulty order to confirm the suites catch it.
  axioms_cmd->add_option("--ordering", *ax_ordering, "Order(s) under test")->group("");
  axioms_cmd->callback([&, ax_seed, ax_cases, ax_suite, ax_ordering] {
    exit_code =
        cmd_axioms(*ax_seed, *ax_cases, *ax_suite, *ax_ordering, format == "machine");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
