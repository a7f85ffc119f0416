#include <cmath>

#include <blackwell/axioms.hpp>
#include <blackwell/stream.hpp>

#include "doctest.h"
#include "support/fixtures.hpp"

using namespace blackwell;
using namespace blackwell::testing;

namespace {

EpStream cycle_of(std::vector<Rational> values) { return EpStream::make({}, std::move(values)); }

StationaryStream fixture_stream(const Mdp& mdp) {
  return make_stationary_stream(mdp, only_rule(mdp), 0);
}

}  // namespace

TEST_CASE("canonical form: shortest cycle, minimal prefix") {
  SUBCASE("repeated cycle collapses") {
    const EpStream u = EpStream::make({}, {rat(1), rat(0), rat(1), rat(0)});
    CHECK(u.cycle() == std::vector<Rational>{rat(1), rat(0)});
  }
  SUBCASE("prefix entry matching the cycle is absorbed") {
    const EpStream u = EpStream::make({rat(0)}, {rat(1), rat(0)});
    CHECK(u.prefix().empty());
    CHECK(u.cycle() == std::vector<Rational>{rat(0), rat(1)});
  }
  SUBCASE("prepend onto a constant stays the constant") {
    const EpStream u = prepend(rat(1), EpStream::constant(rat(1)));
    CHECK(u.prefix().empty());
    CHECK(u.cycle() == std::vector<Rational>{rat(1)});
  }
  SUBCASE("prepend that does not align keeps its prefix") {
    const EpStream u = prepend(rat(1, 2), cycle_of({rat(1), rat(0)}));
    CHECK(u.prefix() == std::vector<Rational>{rat(1, 2)});
    CHECK(u.cycle() == std::vector<Rational>{rat(1), rat(0)});
  }
  SUBCASE("canonicalization is idempotent on generated streams") {
    Rng rng(41);
    for (int i = 0; i < 200; ++i) {
      const EpStream u = gen_ep_stream(rng);
      const EpStream again = EpStream::make(u.prefix(), u.cycle());
      CHECK(u == again);
    }
  }
  SUBCASE("canonicalization preserves the sequence") {
    Rng rng(43);
    for (int i = 0; i < 100; ++i) {
      // Build a redundant representation and check values are untouched.
      const EpStream u = gen_ep_stream(rng);
      std::vector<Rational> prefix = u.prefix();
      std::vector<Rational> doubled = u.cycle();
      doubled.insert(doubled.end(), u.cycle().begin(), u.cycle().end());
      const EpStream v = EpStream::make(std::move(prefix), std::move(doubled));
      CHECK(u == v);
      for (std::int64_t t = 1; t <= 20; ++t) CHECK(u.at(t) == v.at(t));
    }
  }
}

TEST_CASE("EpStream addition uses the joint cycle") {
  SUBCASE("complementary cycles sum to the constant 1") {
    const EpStream sum = add(cycle_of({rat(1), rat(0)}), cycle_of({rat(0), rat(1)}));
    CHECK(sum == EpStream::constant(rat(1)));
  }
  SUBCASE("u + (-u) is the zero stream") {
    Rng rng(47);
    for (int i = 0; i < 100; ++i) {
      const EpStream u = gen_ep_stream(rng);
      CHECK(add(u, negate(u)) == EpStream());
    }
  }
  SUBCASE("cycles of lengths 2 and 3 combine over length 6") {
    const EpStream sum = add(cycle_of({rat(1), rat(0)}), cycle_of({rat(1), rat(0), rat(0)}));
    CHECK(sum.cycle() ==
          std::vector<Rational>{rat(2), rat(0), rat(1), rat(1), rat(1), rat(0)});
    // Brute-force pointwise check far past the joint cycle.
    const EpStream u = cycle_of({rat(1), rat(0)});
    const EpStream v = cycle_of({rat(1), rat(0), rat(0)});
    for (std::int64_t t = 1; t <= 24; ++t) CHECK(sum.at(t) == u.at(t) + v.at(t));
  }
}

TEST_CASE("long_run_average ignores the prefix") {
  CHECK(long_run_average(cycle_of({rat(1), rat(0)})) == rat(1, 2));
  CHECK(long_run_average(EpStream::constant(rat(-7, 3))) == rat(-7, 3));
  const EpStream with_prefix =
      EpStream::make({rat(5), rat(5), rat(5)}, {rat(1), rat(0), rat(0)});
  CHECK(long_run_average(with_prefix) == rat(1, 3));

  // Numeric cross-check of the prefixed case at n = 1e5.
  double sum = 0;
  for (std::int64_t t = 1; t <= 100000; ++t) sum += to_double(with_prefix.at(t));
  CHECK(std::abs(sum / 100000 - 1.0 / 3.0) < 1e-3);

  SUBCASE("average is additive and translation-stable") {
    Rng rng(53);
    for (int i = 0; i < 100; ++i) {
      const EpStream u = gen_ep_stream(rng);
      const EpStream v = gen_ep_stream(rng);
      CHECK(long_run_average(add(u, v)) == long_run_average(u) + long_run_average(v));
      const Rational c = gen_rational(rng, 8, 8);
      CHECK(long_run_average(prepend(c, u)) == long_run_average(u));
    }
  }
}

TEST_CASE("dominates follows the pointwise strict order") {
  CHECK(dominates(cycle_of({rat(1), rat(0)}), EpStream()));
  CHECK(!dominates(cycle_of({rat(1), rat(0)}), cycle_of({rat(1), rat(0)})));
  CHECK(!dominates(cycle_of({rat(1), rat(0)}), cycle_of({rat(0), rat(1)})));
  CHECK(!dominates(cycle_of({rat(0), rat(1)}), cycle_of({rat(1), rat(0)})));

  SUBCASE("adding a nonnegative nonzero stream always dominates") {
    Rng rng(59);
    for (int i = 0; i < 100; ++i) {
      const auto [u, v] = gen_dominating_pair(rng);
      CHECK(dominates(u, v));
      CHECK(!dominates(v, u));
    }
  }
}

TEST_CASE("cesaro_of_partial_sums on the pinned cases") {
  SUBCASE("alternating +-1 averages to 1/2") {
    const auto res = cesaro_of_partial_sums(cycle_of({rat(1), rat(-1)}));
    REQUIRE(res.kind == CesaroResult::Kind::value);
    CHECK(res.value == rat(1, 2));
  }
  SUBCASE("zero stream has value 0") {
    const auto res = cesaro_of_partial_sums(EpStream());
    REQUIRE(res.kind == CesaroResult::Kind::value);
    CHECK(res.value == 0);
  }
  SUBCASE("positive drift diverges") {
    CHECK(cesaro_of_partial_sums(cycle_of({rat(1), rat(0)})).kind ==
          CesaroResult::Kind::diverges_plus);
  }
  SUBCASE("negation flips the outcome") {
    Rng rng(61);
    for (int i = 0; i < 100; ++i) {
      const EpStream d = gen_ep_stream(rng);
      const auto plus = cesaro_of_partial_sums(d);
      const auto minus = cesaro_of_partial_sums(negate(d));
      if (plus.kind == CesaroResult::Kind::value) {
        REQUIRE(minus.kind == CesaroResult::Kind::value);
        CHECK(minus.value == -plus.value);
      } else {
        CHECK(minus.kind == (plus.kind == CesaroResult::Kind::diverges_plus
                                 ? CesaroResult::Kind::diverges_minus
                                 : CesaroResult::Kind::diverges_plus));
      }
    }
  }
  SUBCASE("numeric cross-check of the alternating case at n = 1e5") {
    const EpStream d = cycle_of({rat(1), rat(-1)});
    double partial = 0;
    double acc = 0;
    for (std::int64_t t = 1; t <= 100000; ++t) {
      partial += to_double(d.at(t));
      acc += partial;
    }
    CHECK(std::abs(acc / 100000 - 0.5) < 1e-3);
  }
}

TEST_CASE("decompose splits the fixtures exactly") {
  SUBCASE("swap chain: periodic with zero tail") {
    const auto d = decompose(fixture_stream(swap_mdp()));
    CHECK(d.period == 2);
    CHECK(d.periodic_part == EpStream::make({}, {rat(1), rat(0)}));
    for (const auto& x : d.tail) CHECK(x == 0);
    CHECK(d.decay_ratio == rat(1, 2));  // zero-tail convention
  }
  SUBCASE("absorbing chain: zero periodic part, geometric tail") {
    const auto d = decompose(fixture_stream(absorbing_mdp()));
    CHECK(d.period == 1);
    CHECK(d.periodic_part == EpStream());
    CHECK(d.decay_ratio == rat(1, 2));
    Rational expected = 1;
    for (const auto& x : d.tail) {
      CHECK(x == expected);
      expected /= 2;
    }
  }
  SUBCASE("identity chain: constant periodic part, zero tail") {
    const auto d = decompose(fixture_stream(identity_mdp()));
    CHECK(d.period == 1);
    CHECK(d.periodic_part == EpStream::constant(rat(1)));
    for (const auto& x : d.tail) CHECK(x == 0);
  }
}

TEST_CASE("decompose round-trips exactly and certifies decay") {
  Rng rng(67);
  for (int i = 0; i < 30; ++i) {
    const Mdp mdp = gen_mdp(rng);
    DecisionRule rule{std::vector<int>(mdp.num_states(), 0)};
    for (auto& a : rule.actions) a = rng.range(0, static_cast<int>(mdp.num_actions()) - 1);
    const auto start = static_cast<std::size_t>(rng.below(mdp.num_states()));
    const StationaryStream stream = make_stationary_stream(mdp, rule, start);

    const std::int64_t horizon = default_decompose_horizon(stream);
    const auto d = decompose(stream, horizon);
    const RatVector samples = stream_samples(stream, horizon);
    for (std::int64_t t = 1; t <= horizon; ++t)
      CHECK(samples[static_cast<std::size_t>(t - 1)] ==
            d.periodic_part.at(t) + d.tail[static_cast<std::size_t>(t - 1)]);

    CHECK(d.decay_ratio > 0);
    CHECK(d.decay_ratio < 1);

    // Gain consistency: the periodic part's average is [Q* R]_start.
    const auto limit = limiting_matrix(stream.transition);
    CHECK(long_run_average(d.periodic_part) == (limit.limiting_matrix * stream.reward)[start]);
  }
}

TEST_CASE("decompose rejects an undersized horizon") {
  CHECK_THROWS_AS(decompose(fixture_stream(swap_mdp()), 4), ValidationError);
}

TEST_CASE("fit_decay_certificate error path") {
  // A tail that turns back on after a zero can never certify: 0 -> 1 pairs
  // are infeasible at every onset.
  std::vector<Rational> tail;
  for (int i = 0; i < 16; ++i) tail.push_back(i % 2 ? rat(1) : rat(0));
  CHECK_THROWS_AS(fit_decay_certificate(tail, 1), CertificateError);

  // The same shape at period 2 pairs zeros with zeros and ones with ones and
  // certifies only if the ones decay; constant ones at period 2 give q = 1,
  // which is rejected.
  CHECK_THROWS_AS(fit_decay_certificate(tail, 2), CertificateError);
}

TEST_CASE("stream realizations preserve the values") {
  Rng rng(71);
  SUBCASE("ep_to_stat") {
    for (int i = 0; i < 50; ++i) {
      const EpStream u = gen_ep_stream(rng);
      const StationaryStream s = ep_to_stat(u);
      const RatVector samples = stream_samples(s, 24);
      for (std::int64_t t = 1; t <= 24; ++t)
        CHECK(samples[static_cast<std::size_t>(t - 1)] == u.at(t));
    }
  }
  SUBCASE("prepend_stat") {
    const StationaryStream s = fixture_stream(absorbing_mdp());
    const StationaryStream p = prepend_stat(s, rat(9, 7));
    const RatVector samples = stream_samples(p, 10);
    CHECK(samples[0] == rat(9, 7));
    const RatVector base = stream_samples(s, 9);
    for (std::size_t t = 0; t < base.size(); ++t) CHECK(samples[t + 1] == base[t]);
  }
  SUBCASE("stat_plus_ep") {
    for (int i = 0; i < 20; ++i) {
      const Mdp mdp = gen_mdp(rng);
      DecisionRule rule{std::vector<int>(mdp.num_states(), 0)};
      const StationaryStream s = make_stationary_stream(mdp, rule, 0);
      const EpStream alpha = gen_ep_stream(rng);
      const StationaryStream sum = stat_plus_ep(s, alpha);
      const RatVector lhs = stream_samples(sum, 20);
      const RatVector base = stream_samples(s, 20);
      for (std::int64_t t = 1; t <= 20; ++t)
        CHECK(lhs[static_cast<std::size_t>(t - 1)] ==
              base[static_cast<std::size_t>(t - 1)] + alpha.at(t));
    }
  }
}
