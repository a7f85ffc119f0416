#include <cmath>

#include <blackwell/axioms.hpp>
#include <blackwell/ordering.hpp>

#include "doctest.h"
#include "support/fixtures.hpp"

using namespace blackwell;
using namespace blackwell::testing;

namespace {

StationaryStream stream_from(const Mdp& mdp, std::size_t start) {
  return make_stationary_stream(mdp, only_rule(mdp), start);
}

EpStream cycle_of(std::vector<Rational> values) { return EpStream::make({}, std::move(values)); }

StationaryStream random_stream(Rng& rng) {
  const Mdp mdp = gen_mdp(rng);
  DecisionRule rule{std::vector<int>(mdp.num_states(), 0)};
  for (auto& a : rule.actions) a = rng.range(0, static_cast<int>(mdp.num_actions()) - 1);
  return make_stationary_stream(mdp, rule, static_cast<std::size_t>(rng.below(mdp.num_states())));
}

}  // namespace

TEST_CASE("laurent signature of the swap-chain pair") {
  // Streams (1,0,1,0,...) vs (0,1,0,1,...): no pole, limit value 1/2,
  // consistent with sum beta^t d_t = beta/(1+beta) -> 1/2.
  const Mdp mdp = swap_mdp();
  const auto sig = laurent_signature(stream_from(mdp, 0), stream_from(mdp, 1));
  REQUIRE(sig.coefficients.size() == 8);  // a_{-1} .. a_K with K = S_u + S_v + 2 = 6
  CHECK(sig.coefficients[0] == 0);        // a_{-1}
  CHECK(sig.coefficients[1] == rat(1, 2));  // a_0
  CHECK(*sig.leading_index() == 0);
}

TEST_CASE("laurent signature of a stream against itself is zero") {
  const Mdp mdp = absorbing_mdp();
  const auto sig = laurent_signature(stream_from(mdp, 0), stream_from(mdp, 0));
  CHECK(sig.all_zero());
  CHECK(!sig.leading_index());
}

TEST_CASE("laurent signature sees the gain gap") {
  // Constant 1 vs constant 0: a_{-1} = 1.
  const Mdp ones = identity_mdp();
  const auto sig = laurent_signature(stream_from(ones, 0), stream_from(ones, 1));
  CHECK(sig.coefficients[0] == 1);
  CHECK(*sig.leading_index() == -1);
}

TEST_CASE("single-stream expansion matches hand-computed swap values") {
  // V(beta) = beta/(1-beta^2) from state 1 expands to
  // 1/(2z) - 1/4 - z/8 - z^2/16 at z = 1 - beta.
  const auto coeffs = stream_laurent_coefficients(stream_from(swap_mdp(), 0), 2);
  REQUIRE(coeffs.size() == 4);
  CHECK(coeffs[0] == rat(1, 2));
  CHECK(coeffs[1] == rat(-1, 4));
  CHECK(coeffs[2] == rat(-1, 8));
  CHECK(coeffs[3] == rat(-1, 16));
}

TEST_CASE("abel constant ties the two routes together") {
  // a_0 = psi + tail_sum - gain links the discount expansion to the
  // overtaking data; it must hold exactly on every analyzed stream.
  Rng rng(73);
  for (int i = 0; i < 60; ++i) {
    const auto analysis = analyze(random_stream(rng));
    CHECK(analysis.abel_constant == analysis.psi + analysis.tail_sum - analysis.gain);
  }
}

TEST_CASE("blackwell_compare on the pinned cases") {
  SUBCASE("swap-chain states order by the limit value 1/2") {
    const Mdp mdp = swap_mdp();
    const auto report = blackwell_compare(stream_from(mdp, 0), stream_from(mdp, 1));
    CHECK(report.result == OrderResult::strictly_better);
    CHECK(report.signature.coefficients[0] == 0);
    CHECK(report.signature.coefficients[1] == rat(1, 2));
  }
  SUBCASE("identical streams are equivalent") {
    const Mdp mdp = absorbing_mdp();
    CHECK(blackwell_compare(stream_from(mdp, 0), stream_from(mdp, 0)).result ==
          OrderResult::equivalent);
  }
  SUBCASE("gain gap dominates") {
    const Mdp mdp = identity_mdp();
    const auto report = blackwell_compare(stream_from(mdp, 0), stream_from(mdp, 1));
    CHECK(report.result == OrderResult::strictly_better);
    CHECK(report.signature.coefficients[0] == 1);
  }
  SUBCASE("cycle vs shifted cycle through the EP realization") {
    const auto report = blackwell_compare(cycle_of({rat(1), rat(0)}), cycle_of({rat(0), rat(1)}));
    CHECK(report.result == OrderResult::strictly_better);
    CHECK(report.signature.coefficients[1] == rat(1, 2));
  }
}

TEST_CASE("avg_overtaking_compare on the pinned cases") {
  SUBCASE("alternating difference has Cesaro value 1/2") {
    const auto report =
        avg_overtaking_compare(cycle_of({rat(1), rat(0)}), cycle_of({rat(0), rat(1)}));
    CHECK(report.result == OrderResult::strictly_better);
    REQUIRE(report.cesaro);
    CHECK(report.cesaro->kind == CesaroResult::Kind::value);
    CHECK(report.cesaro->value == rat(1, 2));
  }
  SUBCASE("u vs u is equivalent") {
    const EpStream u = cycle_of({rat(1), rat(0), rat(3, 4)});
    CHECK(avg_overtaking_compare(u, u).result == OrderResult::equivalent);
  }
  SUBCASE("positive drift diverges") {
    const auto report = avg_overtaking_compare(cycle_of({rat(1), rat(0)}), EpStream());
    CHECK(report.result == OrderResult::strictly_better);
    CHECK(report.cesaro->kind == CesaroResult::Kind::diverges_plus);
  }
  SUBCASE("stationary route: swap-chain value is exactly 1/2") {
    const Mdp mdp = swap_mdp();
    const auto report = avg_overtaking_compare(stream_from(mdp, 0), stream_from(mdp, 1));
    CHECK(report.result == OrderResult::strictly_better);
    CHECK(report.cesaro->value == rat(1, 2));
  }
  SUBCASE("stationary route: absorbing stream vs zero rewards sums the tail") {
    // Tail sums to 2; the periodic parts are both zero.
    const Mdp mdp = absorbing_mdp();
    const auto report = avg_overtaking_compare(stream_from(mdp, 0), stream_from(mdp, 1));
    CHECK(report.result == OrderResult::strictly_better);
    CHECK(report.cesaro->value == rat(2));
  }
}

TEST_CASE("the two orders coincide on eventually periodic pairs") {
  Rng rng(79);
  for (int i = 0; i < 150; ++i) {
    const EpStream u = gen_ep_stream(rng);
    const EpStream v = gen_ep_stream(rng);
    CHECK(blackwell_compare(u, v).result == avg_overtaking_compare(u, v).result);
  }
}

TEST_CASE("the two orders coincide on lifted eventually periodic policies") {
  Rng rng(83);
  for (int i = 0; i < 8; ++i) {
    const Mdp mdp = gen_mdp(rng, {3, 2, 8, 8});
    auto random_rule = [&] {
      DecisionRule rule{std::vector<int>(mdp.num_states(), 0)};
      for (auto& a : rule.actions) a = rng.range(0, static_cast<int>(mdp.num_actions()) - 1);
      return rule;
    };
    auto random_policy = [&] {
      PolicySpec policy;
      const int prefix_len = rng.range(0, 2);
      const int cycle_len = rng.range(1, 3);
      for (int k = 0; k < prefix_len; ++k) policy.prefix.push_back(random_rule());
      for (int k = 0; k < cycle_len; ++k) policy.cycle.push_back(random_rule());
      return policy;
    };
    const StationaryStream u = lift_policy(mdp, random_policy(), 0);
    const StationaryStream v = lift_policy(mdp, random_policy(), 0);
    CHECK(blackwell_compare(u, v).result == avg_overtaking_compare(u, v).result);
  }
}

TEST_CASE("translation and compensation behave on stationary streams") {
  const Mdp mdp = swap_mdp();
  const StationaryStream u = stream_from(mdp, 0);
  const StationaryStream v = stream_from(mdp, 1);
  SUBCASE("adding the same EP stream to both sides changes nothing") {
    const EpStream alpha = EpStream::make({rat(1, 4)}, {rat(2), rat(-1), rat(0)});
    using StatCompare = CompareReport (*)(const StationaryStream&, const StationaryStream&);
    for (StatCompare compare : {static_cast<StatCompare>(blackwell_compare),
                                static_cast<StatCompare>(avg_overtaking_compare)}) {
      const auto base = compare(u, v).result;
      const auto shifted = compare(stat_plus_ep(u, alpha), stat_plus_ep(v, alpha)).result;
      CHECK(base == shifted);
    }
  }
  SUBCASE("one-period postponement compensated by the gain is indifferent") {
    for (const auto& stream : {u, v, stream_from(absorbing_mdp(), 0)}) {
      const Rational gain = analyze(stream).gain;
      CHECK(blackwell_compare(prepend_stat(stream, gain), stream).result ==
            OrderResult::equivalent);
      CHECK(avg_overtaking_compare(prepend_stat(stream, gain), stream).result ==
            OrderResult::equivalent);
    }
  }
}

TEST_CASE("discount oracle approximates the closed forms") {
  const Mdp mdp = swap_mdp();
  SUBCASE("swap pair at beta = 0.99 is beta/(1+beta)") {
    const double value = oracle_discounted(stream_from(mdp, 0), stream_from(mdp, 1), 0.99);
    CHECK(std::abs(value - 0.99 / 1.99) < 1e-9);
  }
  SUBCASE("identical streams give exactly zero") {
    CHECK(oracle_discounted(stream_from(mdp, 0), stream_from(mdp, 0), 0.9) == 0.0);
  }
  SUBCASE("constant gap at beta = 0.9 is beta/(1-beta) = 9") {
    const Mdp ones = identity_mdp();
    const double value = oracle_discounted(stream_from(ones, 0), stream_from(ones, 1), 0.9);
    CHECK(std::abs(value - 9.0) < 1e-9);
  }
  SUBCASE("EP flavor agrees with the stationary flavor") {
    const double ep = oracle_discounted(cycle_of({rat(1), rat(0)}), cycle_of({rat(0), rat(1)}),
                                        0.999);
    const double stat =
        oracle_discounted(stream_from(mdp, 0), stream_from(mdp, 1), 0.999);
    CHECK(std::abs(ep - stat) < 1e-9);
  }
}

TEST_CASE("average-overtaking oracle approximates the running averages") {
  const Mdp mdp = swap_mdp();
  SUBCASE("swap pair at n = 1e4 sits at 1/2") {
    const double value =
        oracle_avg_overtaking(stream_from(mdp, 0), stream_from(mdp, 1), 10000);
    CHECK(std::abs(value - 0.5) < 1e-3);
  }
  SUBCASE("identical streams give exactly zero") {
    CHECK(oracle_avg_overtaking(stream_from(mdp, 0), stream_from(mdp, 0), 10000) == 0.0);
  }
  SUBCASE("drifting difference grows like n/4") {
    const double value = oracle_avg_overtaking(cycle_of({rat(1), rat(0)}), EpStream(), 10000);
    CHECK(value > 0);
    CHECK(std::abs(value - (10000.0 / 4.0 + 0.5)) < 1e-6);
  }
}

TEST_CASE("find_blackwell_optimal on the pinned cases") {
  SUBCASE("single action: the unique rule") {
    const Mdp mdp = swap_mdp();
    const auto rules = find_blackwell_optimal(mdp, 0);
    REQUIRE(rules.size() == 1);
    CHECK(rules[0] == only_rule(mdp));
  }
  SUBCASE("one state, reward 1 beats reward 0") {
    const Mdp mdp = one_state_two_actions_mdp();
    const auto rules = find_blackwell_optimal(mdp, 0);
    REQUIRE(rules.size() == 1);
    CHECK(rules[0] == DecisionRule{{0}});
  }
  SUBCASE("gain 3/4 beats the one-shot reward") {
    // Both actions behave identically at the absorbing state, so the two
    // loop-at-s1 rules tie; what matters is that every maximal rule loops at
    // the choice state.
    const Mdp mdp = gain_vs_transient_mdp();
    const auto rules = find_blackwell_optimal(mdp, 0);
    REQUIRE(rules.size() == 2);
    for (const auto& rule : rules) CHECK(rule.actions[0] == 1);
    const auto everywhere = find_blackwell_optimal_all_states(mdp);
    REQUIRE(!everywhere.empty());
    for (const auto& rule : everywhere) CHECK(rule.actions[0] == 1);
  }
  SUBCASE("ties are all reported") {
    // Two actions with identical dynamics: every rule is maximal.
    RawMdp raw;
    raw.states = {"s1"};
    raw.actions = {"a", "b"};
    raw.transitions["a"] = {{"1"}};
    raw.transitions["b"] = {{"1"}};
    raw.rewards["a"] = {"2/3"};
    raw.rewards["b"] = {"2/3"};
    const auto rules = find_blackwell_optimal(validate_mdp(raw), 0);
    REQUIRE(rules.size() == 2);
    CHECK(rules[0] == DecisionRule{{0}});
    CHECK(rules[1] == DecisionRule{{1}});
  }
}

TEST_CASE("all-states optima are nonempty on generated MDPs") {
  Rng rng(89);
  for (int i = 0; i < 25; ++i) {
    const Mdp mdp = gen_mdp(rng);
    const auto rules = find_blackwell_optimal_all_states(mdp);
    CHECK(!rules.empty());
    // Every reported rule is pairwise equivalent-or-better against all rules
    // at every state, per the single-state comparison.
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
      const auto at_state = find_blackwell_optimal(mdp, s);
      for (const auto& rule : rules)
        CHECK(std::find(at_state.begin(), at_state.end(), rule) != at_state.end());
    }
  }
}

TEST_CASE("oracle signs track the leading signature coefficient") {
  // Constant-level pairs (equal gains) come from two start states of the same
  // chain: the truncated sum at beta = 1 - 1e-4 must carry the decided sign
  // whenever the constant coefficient exceeds 1e-8. Pole pairs must grow in
  // magnitude toward beta = 1 with the decided sign.
  Rng rng(163);
  int constant_level_checks = 0;
  int pole_checks = 0;
  int attempts = 0;
  while ((constant_level_checks < 6 || pole_checks < 6) && attempts++ < 200) {
    if (constant_level_checks < 6) {
      const StationaryStream u = random_stream(rng);
      if (u.num_states() >= 2) {
        const StationaryStream v(u.transition, u.reward, (u.start + 1) % u.num_states());
        const auto report = blackwell_compare(u, v);
        if (report.signature.coefficients[0] == 0 &&
            abs_of(report.signature.coefficients[1]) > rational(1, 100000000)) {
          const double sign = report.result == OrderResult::strictly_better ? 1.0 : -1.0;
          CHECK(oracle_discounted(u, v, 0.9999) * sign > 0);
          ++constant_level_checks;
        }
      }
    }
    if (pole_checks < 6) {
      const StationaryStream u = random_stream(rng);
      const StationaryStream v = random_stream(rng);
      const auto report = blackwell_compare(u, v);
      if (report.signature.coefficients[0] != 0) {
        const double sign = report.result == OrderResult::strictly_better ? 1.0 : -1.0;
        const double near = oracle_discounted(u, v, 0.999);
        const double nearer = oracle_discounted(u, v, 0.9999);
        CHECK(near * sign > 0);
        CHECK(nearer * sign > 0);
        CHECK(std::abs(nearer) > std::abs(near));
        ++pole_checks;
      }
    }
  }
  CHECK(constant_level_checks >= 6);
  CHECK(pole_checks >= 6);
}

TEST_CASE("full signature and compare decision agree on the shared prefix") {
  Rng rng(157);
  for (int i = 0; i < 30; ++i) {
    const StationaryStream u = random_stream(rng);
    const StationaryStream v = random_stream(rng);
    const auto report = blackwell_compare(u, v);
    const auto sig = laurent_signature(u, v);
    REQUIRE(sig.coefficients.size() >= 2);
    CHECK(sig.coefficients[0] == report.signature.coefficients[0]);
    CHECK(sig.coefficients[1] == report.signature.coefficients[1]);
  }
}

TEST_CASE("EP discounted sums agree between the closed form and the chain resolvent") {
  // Two independent exact routes to sum beta^t u_t: the geometric closed
  // form over the prefix and cycle, and beta (I - beta Q)^{-1} R on the
  // realized chain.
  Rng rng(167);
  for (int i = 0; i < 40; ++i) {
    const EpStream u = gen_ep_stream(rng);
    const int den = rng.range(2, 10);
    const Rational beta = rational(rng.range(1, den - 1), den);
    const StationaryStream s = ep_to_stat(u);
    const std::size_t n = s.num_states();
    RatMatrix system = RatMatrix::identity(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) system(r, c) -= beta * s.transition(r, c);
    const Rational via_chain = beta * solve_exact(system, s.reward)[s.start];
    CHECK(via_chain == ep_discounted_sum_exact(u, beta));
  }
}

TEST_CASE("exactness survives large numerators") {
  RawMdp raw;
  raw.states = {"s1", "s2"};
  raw.actions = {"a"};
  raw.transitions["a"] = {{"982451653/982451655", "2/982451655"}, {"0", "1"}};
  raw.rewards["a"] = {"982451653/7", "-1/982451653"};
  const Mdp mdp = validate_mdp(raw);
  const auto u = generate_stream(mdp, PolicySpec::stationary(DecisionRule{{0, 0}}), 0, 6);
  // u_2 = p11 * r1 + p12 * r2, all exact.
  const Rational expected =
      rational(982451653, 982451655) * rational(982451653, 7) +
      rational(2, 982451655) * rational(-1, 982451653);
  CHECK(u[1] == expected);
  CHECK(*parse_rational(to_string(u[5])) == u[5]);
}

TEST_CASE("order results swap consistently") {
  Rng rng(97);
  for (int i = 0; i < 60; ++i) {
    const EpStream u = gen_ep_stream(rng);
    const EpStream v = gen_ep_stream(rng);
    CHECK(blackwell_compare(u, v).result == swap_sides(blackwell_compare(v, u).result));
    CHECK(avg_overtaking_compare(u, v).result ==
          swap_sides(avg_overtaking_compare(v, u).result));
  }
}
