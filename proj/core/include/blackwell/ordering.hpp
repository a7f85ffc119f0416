#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "blackwell/stream.hpp"

namespace blackwell {

enum class OrderResult { strictly_better, strictly_worse, equivalent };

/// strictly_better <-> strictly_worse; equivalent is a fixed point.
OrderResult swap_sides(OrderResult r);

const char* to_string(OrderResult r);

/// Coefficients of the discounted-value difference f(beta) = V_u - V_v
/// expanded in powers of z = 1 - beta:
///   f = a_{-1}/z + a_0 + a_1 z + ... + a_K z^K,
/// coefficients[i] holding a_{i-1}. The expansion variable is z = 1 - beta
/// exactly (not (1-beta)/beta); a_{-1} > 0 means f -> +infinity as
/// beta -> 1^-, and when a_{-1} = 0 the limit of f equals a_0. Signs are the
/// contract; the float oracles pin them.
///
/// f is a rational function whose denominator divides the product of the two
/// characteristic polynomials, so its numerator and denominator degrees are
/// bounded by S_u + S_v; if every coefficient through K = S_u + S_v + 2
/// vanishes, f is identically zero.
struct LaurentSignature {
  std::vector<Rational> coefficients;

  bool all_zero() const;
  /// Index (in Laurent numbering, -1 first) of the first nonzero coefficient,
  /// or nullopt when all are zero.
  std::optional<int> leading_index() const;
};

enum class Criterion { blackwell, avg_overtaking };

/// A numeric cross-check point: a truncated discounted sum at some beta, or a
/// running Cesaro average at some n.
struct OracleSample {
  double parameter = 0;  // beta or n
  double value = 0;
};

struct CompareReport {
  Criterion criterion = Criterion::blackwell;
  OrderResult result = OrderResult::equivalent;
  LaurentSignature signature;            // discount route evidence
  std::optional<CesaroResult> cesaro;    // overtaking route evidence
  std::vector<OracleSample> oracle_samples;  // filled by callers that run the oracles
};

/// Exact per-stream data shared by both orders. gain is the coefficient of
/// 1/(1-beta) in the stream's own discounted value and equals [Q* R]_start;
/// abel_constant is the constant term of that expansion; periodic_part, psi
/// and tail_sum feed the overtaking route:
///   psi      = cycle mean of (partial sums of w minus t * gain),
///   tail_sum = sum_t (u_t - w_t) = [(I - Q + (Q^p)*)^{-1} (I - (Q^p)*) R]_start.
/// The two routes are linked by abel_constant = psi + tail_sum - gain, which
/// the test suite asserts but library code never assumes.
struct StreamAnalysis {
  StationaryStream stream;
  ChainStructure structure;
  RatMatrix qstar;
  Rational gain;
  Rational abel_constant;
  EpStream periodic_part;
  int period = 1;
  Rational psi;
  Rational tail_sum;
};

/// State-independent part of the analysis: everything about (Q, R) that all
/// start states share. Bulk sweeps compute this once per decision rule.
struct ChainData {
  RatMatrix transition;
  RatVector reward;
  ChainStructure structure;
  RatMatrix qstar;
  RatVector gain;             // Q* R
  RatVector fundamental_h0;   // (I - Q + Q*)^{-1} R
  std::vector<RatVector> orbit;  // (Q^p)* Q^j R, j = 0..p-1
  RatVector tail;             // (I - Q + (Q^p)*)^{-1} (I - (Q^p)*) R
  int period = 1;
};

ChainData analyze_chain(RatMatrix transition, RatVector reward);

/// Cheap per-state view into a ChainData.
StreamAnalysis analysis_at(const ChainData& data, std::size_t start);

StreamAnalysis analyze(const StationaryStream& u);

/// Exact expansion of V_u - V_v through z^K. K >= 0; pass S_u + S_v + 2 (the
/// default overload) to make an all-zero signature certify f == 0.
LaurentSignature laurent_signature(const StationaryStream& u, const StationaryStream& v,
                                   int coefficient_cap);
LaurentSignature laurent_signature(const StationaryStream& u, const StationaryStream& v);

/// Laurent coefficients a_{-1}..a_K of a single stream's discounted value.
std::vector<Rational> stream_laurent_coefficients(const StationaryStream& u,
                                                  int coefficient_cap);

/// Order induced by the limit of the discounted-value difference at
/// beta -> 1^-. The difference is a rational function of beta, so the liminf
/// is a genuine limit in [-inf, +inf]: it is +inf/-inf when a_{-1} is
/// nonzero and a_0 otherwise. Equivalence is a zero limit, i.e.
/// a_{-1} = a_0 = 0.
CompareReport blackwell_compare(const StreamAnalysis& u, const StreamAnalysis& v);
CompareReport blackwell_compare(const StationaryStream& u, const StationaryStream& v);
/// Eventually periodic streams are realized as cyclic-chain stationary
/// streams; one exact path for both flavors.
CompareReport blackwell_compare(const EpStream& u, const EpStream& v);

/// Order induced by the running average of the partial sums of u - v.
/// For stationary streams the difference of the periodic parts decides
/// divergence through its cycle sum; at cycle sum zero the exact limit is
/// cesaro_of_partial_sums(w_u - w_v) plus the difference of the tail sums.
/// On this domain both liminfs are limits, so one computation decides both
/// argument orders consistently.
CompareReport avg_overtaking_compare(const StreamAnalysis& u, const StreamAnalysis& v);
CompareReport avg_overtaking_compare(const StationaryStream& u, const StationaryStream& v);
CompareReport avg_overtaking_compare(const EpStream& u, const EpStream& v);

/// Truncated float sum of beta^t (u_t - v_t). horizon <= 0 picks the smallest
/// horizon whose geometric tail bound is below 1e-12.
double oracle_discounted(const StationaryStream& u, const StationaryStream& v, double beta,
                         std::int64_t horizon = 0);
double oracle_discounted(const EpStream& u, const EpStream& v, double beta,
                         std::int64_t horizon = 0);

/// (1/n) sum_{T<=n} sum_{t<=T} (u_t - v_t) in floats.
double oracle_avg_overtaking(const StationaryStream& u, const StationaryStream& v,
                             std::int64_t n);
double oracle_avg_overtaking(const EpStream& u, const EpStream& v, std::int64_t n);

/// Per-rule exact optimality data: gain and abel constant at every state.
struct RuleValue {
  DecisionRule rule;
  RatVector gain;
  RatVector abel_constant;
};

RuleValue rule_value(const Mdp& mdp, const DecisionRule& rule);

/// All decision rules whose stream from `start` is maximal in the discount
/// order (never strictly worse against any rule), in lexicographic order.
std::vector<DecisionRule> find_blackwell_optimal(const Mdp& mdp, std::size_t start,
                                                 std::uint64_t cap = kDefaultRuleCap);

/// Rules maximal simultaneously at every start state. Nonempty for every
/// finite MDP; an empty result is a bug and throws InternalError.
std::vector<DecisionRule> find_blackwell_optimal_all_states(const Mdp& mdp,
                                                            std::uint64_t cap = kDefaultRuleCap);

}  // namespace blackwell
