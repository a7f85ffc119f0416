#pragma once

#include <functional>
#include <string>
#include <vector>

#include "blackwell/ordering.hpp"
#include "blackwell/rng.hpp"

namespace blackwell {

/// A pluggable preference order under test: one comparison per stream flavor.
/// compare_stat may be empty for toy orders that only speak eventually
/// periodic streams; stat-based checks then skip that order.
struct OrderingUnderTest {
  std::string name;
  std::function<OrderResult(const EpStream&, const EpStream&)> compare_ep;
  std::function<OrderResult(const StationaryStream&, const StationaryStream&)> compare_stat;
};

OrderingUnderTest blackwell_ordering();
OrderingUnderTest avg_overtaking_ordering();

/// Planted-fault orders for harness self-tests.
/// Declares everything equivalent; caught by the dominance check.
OrderingUnderTest always_equivalent_ordering();
/// Compares truncated sums through `horizon`; caught by the dominance check
/// (strict index past the horizon) and by the compensation check.
OrderingUnderTest horizon_truncated_ordering(std::int64_t horizon);
/// Compares exact discounted sums at one fixed beta; translation-invariant
/// and dominance-monotone, but caught by the compensation check.
OrderingUnderTest fixed_discount_ordering(const Rational& beta);
/// Compares peak values sup_t u_t; not translation-invariant, caught by the
/// translation check. (Difference-based orders satisfy translation invariance
/// identically, so a planted A2 failure has to look at u and v separately.)
OrderingUnderTest peak_reward_ordering();

OrderingUnderTest ordering_by_name(const std::string& name);

/// Exact discounted sum of an eventually periodic stream at rational beta in
/// (0,1); geometric closed form over the cycle.
Rational ep_discounted_sum_exact(const EpStream& u, const Rational& beta);

/// Case generation parameters. Entry values are num/den with |num| <= max_numerator,
/// 1 <= den <= max_denominator.
struct EpGenParams {
  int max_prefix = 4;
  int max_cycle = 6;
  int max_numerator = 8;
  int max_denominator = 8;
};

struct MdpGenParams {
  int max_states = 4;
  int max_actions = 3;
  int max_denominator = 8;
  int max_reward_numerator = 8;
};

Rational gen_rational(Rng& rng, int max_numerator, int max_denominator);
EpStream gen_ep_stream(Rng& rng, const EpGenParams& params = {});
/// (u, v) with u = v + delta for a nonnegative, somewhere-positive delta.
std::pair<EpStream, EpStream> gen_dominating_pair(Rng& rng, const EpGenParams& params = {});
Mdp gen_mdp(Rng& rng, const MdpGenParams& params = {});

/// Outcome of one suite run. Failures carry the full case data in replayable
/// text form (stream prefix|cycle notation, MDP JSON).
struct AxiomReport {
  std::string suite;     // "a1", "a2", "a3", "theorem1"
  std::string ordering;  // name of the order under test
  std::int64_t cases = 0;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// Replayable text forms used in failure reports.
std::string ep_to_text(const EpStream& u);
std::string stat_to_text(const StationaryStream& u);

/// Dominance monotonicity: u > v pointwise forces strictly_better.
/// Cases are generator-enforced dominating pairs.
AxiomReport check_a1(const OrderingUnderTest& ord,
                     const std::vector<std::pair<EpStream, EpStream>>& cases);

/// Translation invariance: adding the same stream to both sides must not
/// change the comparison outcome.
AxiomReport check_a2(const OrderingUnderTest& ord,
                     const std::vector<std::tuple<EpStream, EpStream, EpStream>>& cases);

/// Compensation: a one-period postponement compensated by the long-run
/// average is indifferent. Eventually periodic streams always have a
/// well-defined average; stationary streams use their gain.
AxiomReport check_a3(const OrderingUnderTest& ord, const std::vector<EpStream>& ep_cases,
                     const std::vector<StationaryStream>& stat_cases = {});

/// Exhaustive coincidence check over one MDP: for every ordered pair of
/// (rule, start-state) streams the discount order and the average-overtaking
/// order must return the same result; also asserts swap antisymmetry for
/// both orders and transitivity on sampled triples.
AxiomReport check_theorem1(const Mdp& mdp, Rng& rng, int sampled_triples = 32);

/// Configuration for the suite runner shared by the CLI and the tests.
struct SuiteConfig {
  std::uint64_t seed = 42;
  std::int64_t cases = 200;
  std::string suite = "all";     // a1 | a2 | a3 | theorem1 | all
  std::string ordering = "both"; // both | blackwell | avg-overtaking | dummy names
};

std::vector<AxiomReport> run_suites(const SuiteConfig& config);

}  // namespace blackwell
