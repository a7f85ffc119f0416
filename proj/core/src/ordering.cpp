#include "blackwell/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace blackwell {

namespace {

OrderResult result_from_sign(int s) {
  if (s > 0) return OrderResult::strictly_better;
  if (s < 0) return OrderResult::strictly_worse;
  return OrderResult::equivalent;
}

OrderResult result_from_cesaro(const CesaroResult& c) {
  switch (c.kind) {
    case CesaroResult::Kind::diverges_plus:
      return OrderResult::strictly_better;
    case CesaroResult::Kind::diverges_minus:
      return OrderResult::strictly_worse;
    case CesaroResult::Kind::value:
      return result_from_sign(sign_of(c.value));
  }
  return OrderResult::equivalent;
}

/// Kahan-compensated accumulator; the oracles run to ~4e5 terms.
struct CompensatedSum {
  double sum = 0;
  double carry = 0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

/// Float mirror of a stationary stream: iterates the start row through the
/// transition matrix in doubles.
class FloatStreamIter {
 public:
  explicit FloatStreamIter(const StationaryStream& u)
      : transition_(u.num_states() * u.num_states()), reward_(u.num_states()),
        row_(u.num_states(), 0.0), n_(u.num_states()) {
    for (std::size_t i = 0; i < n_; ++i) {
      reward_[i] = to_double(u.reward[i]);
      for (std::size_t j = 0; j < n_; ++j) transition_[i * n_ + j] = to_double(u.transition(i, j));
    }
    row_[u.start] = 1.0;
  }

  double next() {
    double value = 0;
    for (std::size_t i = 0; i < n_; ++i) value += row_[i] * reward_[i];
    std::vector<double> advanced(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      if (row_[i] == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) advanced[j] += row_[i] * transition_[i * n_ + j];
    }
    row_ = std::move(advanced);
    return value;
  }

 private:
  std::vector<double> transition_;
  std::vector<double> reward_;
  std::vector<double> row_;
  std::size_t n_;
};

/// Float mirror of an eventually periodic stream.
class FloatEpIter {
 public:
  explicit FloatEpIter(const EpStream& u) : prefix_len_(u.prefix().size()) {
    for (const auto& x : u.prefix()) values_.push_back(to_double(x));
    for (const auto& x : u.cycle()) values_.push_back(to_double(x));
    cycle_len_ = values_.size() - prefix_len_;
  }

  double next() {
    const double value = values_[pos_];
    ++pos_;
    if (pos_ == values_.size()) pos_ = prefix_len_;
    return value;
  }

 private:
  std::vector<double> values_;
  std::size_t prefix_len_;
  std::size_t cycle_len_ = 0;
  std::size_t pos_ = 0;
};

double max_abs_reward(const StationaryStream& u) {
  double best = 0;
  for (const auto& r : u.reward) best = std::max(best, std::abs(to_double(r)));
  return best;
}

double max_abs_value(const EpStream& u) {
  double best = 0;
  for (const auto& x : u.prefix()) best = std::max(best, std::abs(to_double(x)));
  for (const auto& x : u.cycle()) best = std::max(best, std::abs(to_double(x)));
  return best;
}

std::int64_t discount_horizon(double beta, double range, std::int64_t requested) {
  if (!(beta > 0.0 && beta < 1.0))
    throw ValidationError("discount factor must lie in (0,1)");
  // Tail bound beta^h * range / (1-beta) < 1e-12.
  const double scale = std::max(range, 1.0) / (1.0 - beta);
  const auto needed =
      static_cast<std::int64_t>(std::ceil(std::log(scale * 1e12) / -std::log(beta))) + 1;
  return std::max<std::int64_t>({requested, needed, 1});
}

template <typename Iter>
double discounted_difference(Iter&& iter_u, Iter&& iter_v, double beta, std::int64_t horizon) {
  CompensatedSum acc;
  double weight = beta;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    acc.add(weight * (iter_u.next() - iter_v.next()));
    weight *= beta;
  }
  return acc.sum;
}

template <typename Iter>
double average_overtaking_value(Iter&& iter_u, Iter&& iter_v, std::int64_t n) {
  if (n < 1) throw ValidationError("oracle n must be >= 1");
  CompensatedSum partial;
  CompensatedSum total;
  for (std::int64_t t = 1; t <= n; ++t) {
    partial.add(iter_u.next() - iter_v.next());
    total.add(partial.sum);
  }
  return total.sum / static_cast<double>(n);
}

}  // namespace

OrderResult swap_sides(OrderResult r) {
  switch (r) {
    case OrderResult::strictly_better:
      return OrderResult::strictly_worse;
    case OrderResult::strictly_worse:
      return OrderResult::strictly_better;
    case OrderResult::equivalent:
      return OrderResult::equivalent;
  }
  return OrderResult::equivalent;
}

const char* to_string(OrderResult r) {
  switch (r) {
    case OrderResult::strictly_better:
      return "strictly_better";
    case OrderResult::strictly_worse:
      return "strictly_worse";
    case OrderResult::equivalent:
      return "equivalent";
  }
  return "equivalent";
}

bool LaurentSignature::all_zero() const {
  return std::all_of(coefficients.begin(), coefficients.end(),
                     [](const Rational& c) { return c == 0; });
}

std::optional<int> LaurentSignature::leading_index() const {
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    if (coefficients[i] != 0) return static_cast<int>(i) - 1;
  return std::nullopt;
}

ChainData analyze_chain(RatMatrix transition, RatVector reward) {
  ChainData out;
  out.structure = chain_structure(transition);
  out.period = out.structure.global_period;
  out.qstar = limiting_matrix(transition).limiting_matrix;

  const std::size_t n = transition.rows();
  out.gain = out.qstar * reward;

  // Fundamental system (I - Q + Q*) h = R gives the constant terms.
  ExactLu fundamental(RatMatrix::identity(n) - transition + out.qstar);
  out.fundamental_h0 = fundamental.solve(reward);

  // Exact periodic orbit; per-state streams index into it.
  out.orbit = cycle_limit_vectors(transition, reward, out.structure);

  // Tail sums via the resolvent at 1 of the strictly contracting part. The
  // projector onto every unit-circle eigenspace is (Q^p)*, which is Q* itself
  // for aperiodic chains.
  const RatMatrix pp_star =
      out.period == 1
          ? out.qstar
          : limiting_matrix(mat_pow(transition, static_cast<unsigned long>(out.period)))
                .limiting_matrix;
  RatVector centered = reward;
  {
    const RatVector projected = pp_star * reward;
    for (std::size_t i = 0; i < n; ++i) centered[i] -= projected[i];
  }
  out.tail = solve_exact(RatMatrix::identity(n) - transition + pp_star, centered);

  out.transition = std::move(transition);
  out.reward = std::move(reward);
  return out;
}

StreamAnalysis analysis_at(const ChainData& data, std::size_t start) {
  if (start >= data.transition.rows())
    throw ValidationError("analysis_at: start state out of range");
  StreamAnalysis out{StationaryStream(data.transition, data.reward, start),
                     data.structure, data.qstar, {}, {}, {}, data.period, {}, {}};
  out.gain = data.gain[start];
  out.abel_constant = data.fundamental_h0[start] - 2 * out.gain;

  std::vector<Rational> cycle;
  cycle.reserve(data.orbit.size());
  for (const auto& vec : data.orbit) cycle.push_back(vec[start]);

  // Cycle mean of the gain-centered partial sums of the periodic part.
  Rational running;
  Rational accumulated;
  for (std::size_t j = 0; j < cycle.size(); ++j) {
    running += cycle[j];
    accumulated += running - static_cast<long>(j + 1) * out.gain;
  }
  out.psi = accumulated / static_cast<long>(cycle.size());
  out.periodic_part = EpStream::make({}, std::move(cycle));
  out.tail_sum = data.tail[start];
  return out;
}

StreamAnalysis analyze(const StationaryStream& u) {
  return analysis_at(analyze_chain(u.transition, u.reward), u.start);
}

std::vector<Rational> stream_laurent_coefficients(const StationaryStream& u,
                                                  int coefficient_cap) {
  if (coefficient_cap < 0) throw ValidationError("coefficient cap must be >= 0");
  const std::size_t n = u.num_states();
  const RatMatrix qstar = limiting_matrix(u.transition).limiting_matrix;
  const Rational gain = (qstar * u.reward)[u.start];

  ExactLu fundamental(RatMatrix::identity(n) - u.transition + qstar);

  // h_k = (M^{-1} (Q - Q*))^k M^{-1} R; the expansion in z = 1 - beta is
  //   V = gain/z + (h_0 - 2 gain) + z (gain - h_1 - h_0)
  //       + sum_{k>=2} z^k (-1)^k (h_k + h_{k-1}).
  std::vector<Rational> coefficients;
  coefficients.reserve(static_cast<std::size_t>(coefficient_cap) + 2);
  coefficients.push_back(gain);

  RatVector h0 = fundamental.solve(u.reward);
  coefficients.push_back(h0[u.start] - 2 * gain);
  if (coefficient_cap >= 1) {
    auto apply_contracted = [&](const RatVector& h) {
      RatVector shifted = u.transition * h;
      const RatVector projected = qstar * h;
      for (std::size_t i = 0; i < n; ++i) shifted[i] -= projected[i];
      return fundamental.solve(shifted);
    };
    RatVector h_curr = apply_contracted(h0);
    coefficients.push_back(gain - h_curr[u.start] - h0[u.start]);
    int parity = 1;  // (-1)^k for k = 2, 3, ...
    for (int k = 2; k <= coefficient_cap; ++k) {
      RatVector h_next = apply_contracted(h_curr);
      coefficients.push_back(Rational(parity) * (h_next[u.start] + h_curr[u.start]));
      h_curr = std::move(h_next);
      parity = -parity;
    }
  }
  return coefficients;
}

LaurentSignature laurent_signature(const StationaryStream& u, const StationaryStream& v,
                                   int coefficient_cap) {
  const auto cu = stream_laurent_coefficients(u, coefficient_cap);
  const auto cv = stream_laurent_coefficients(v, coefficient_cap);
  LaurentSignature out;
  out.coefficients.reserve(cu.size());
  for (std::size_t i = 0; i < cu.size(); ++i) out.coefficients.push_back(cu[i] - cv[i]);
  return out;
}

LaurentSignature laurent_signature(const StationaryStream& u, const StationaryStream& v) {
  return laurent_signature(u, v,
                           static_cast<int>(u.num_states() + v.num_states()) + 2);
}

CompareReport blackwell_compare(const StreamAnalysis& u, const StreamAnalysis& v) {
  CompareReport report;
  report.criterion = Criterion::blackwell;
  const Rational gain_diff = u.gain - v.gain;
  const Rational const_diff = u.abel_constant - v.abel_constant;
  report.signature.coefficients = {gain_diff, const_diff};
  if (gain_diff != 0)
    report.result = result_from_sign(sign_of(gain_diff));
  else
    report.result = result_from_sign(sign_of(const_diff));
  return report;
}

CompareReport blackwell_compare(const StationaryStream& u, const StationaryStream& v) {
  return blackwell_compare(analyze(u), analyze(v));
}

CompareReport blackwell_compare(const EpStream& u, const EpStream& v) {
  return blackwell_compare(ep_to_stat(u), ep_to_stat(v));
}

CompareReport avg_overtaking_compare(const StreamAnalysis& u, const StreamAnalysis& v) {
  CompareReport report;
  report.criterion = Criterion::avg_overtaking;

  const EpStream periodic_diff = subtract(u.periodic_part, v.periodic_part);
  CesaroResult w_limit = cesaro_of_partial_sums(periodic_diff);
  if (w_limit.kind != CesaroResult::Kind::value) {
    report.result = result_from_cesaro(w_limit);
    report.cesaro = std::move(w_limit);
    return report;
  }
  CesaroResult total{CesaroResult::Kind::value,
                     w_limit.value + u.tail_sum - v.tail_sum};
  report.result = result_from_cesaro(total);
  report.cesaro = std::move(total);
  return report;
}

CompareReport avg_overtaking_compare(const StationaryStream& u, const StationaryStream& v) {
  return avg_overtaking_compare(analyze(u), analyze(v));
}

CompareReport avg_overtaking_compare(const EpStream& u, const EpStream& v) {
  CompareReport report;
  report.criterion = Criterion::avg_overtaking;
  CesaroResult limit = cesaro_of_partial_sums(subtract(u, v));
  report.result = result_from_cesaro(limit);
  report.cesaro = std::move(limit);
  return report;
}

double oracle_discounted(const StationaryStream& u, const StationaryStream& v, double beta,
                         std::int64_t horizon) {
  const double range = max_abs_reward(u) + max_abs_reward(v);
  const std::int64_t h = discount_horizon(beta, range, horizon);
  return discounted_difference(FloatStreamIter(u), FloatStreamIter(v), beta, h);
}

double oracle_discounted(const EpStream& u, const EpStream& v, double beta,
                         std::int64_t horizon) {
  const double range = max_abs_value(u) + max_abs_value(v);
  const std::int64_t h = discount_horizon(beta, range, horizon);
  return discounted_difference(FloatEpIter(u), FloatEpIter(v), beta, h);
}

double oracle_avg_overtaking(const StationaryStream& u, const StationaryStream& v,
                             std::int64_t n) {
  return average_overtaking_value(FloatStreamIter(u), FloatStreamIter(v), n);
}

double oracle_avg_overtaking(const EpStream& u, const EpStream& v, std::int64_t n) {
  return average_overtaking_value(FloatEpIter(u), FloatEpIter(v), n);
}

RuleValue rule_value(const Mdp& mdp, const DecisionRule& rule) {
  auto [transition, reward] = rule_matrices(mdp, rule);
  const std::size_t n = mdp.num_states();
  const RatMatrix qstar = limiting_matrix(transition).limiting_matrix;
  RatVector gain = qstar * reward;
  ExactLu fundamental(RatMatrix::identity(n) - transition + qstar);
  RatVector h0 = fundamental.solve(reward);
  RatVector abel(n);
  for (std::size_t s = 0; s < n; ++s) abel[s] = h0[s] - 2 * gain[s];
  return RuleValue{rule, std::move(gain), std::move(abel)};
}

namespace {

/// Lexicographic order on (gain, abel constant) at one state decides the
/// discount order between two rules' streams from that state.
int lex_compare_at(const RuleValue& a, const RuleValue& b, std::size_t s) {
  if (a.gain[s] != b.gain[s]) return a.gain[s] < b.gain[s] ? -1 : 1;
  if (a.abel_constant[s] != b.abel_constant[s])
    return a.abel_constant[s] < b.abel_constant[s] ? -1 : 1;
  return 0;
}

std::vector<RuleValue> all_rule_values(const Mdp& mdp, std::uint64_t cap) {
  const auto rules = enumerate_decision_rules(mdp, cap);
  std::vector<RuleValue> values;
  values.reserve(rules.size());
  for (const auto& rule : rules) values.push_back(rule_value(mdp, rule));
  return values;
}

}  // namespace

std::vector<DecisionRule> find_blackwell_optimal(const Mdp& mdp, std::size_t start,
                                                 std::uint64_t cap) {
  if (start >= mdp.num_states()) throw ValidationError("start state out of range");
  const auto values = all_rule_values(mdp, cap);
  const RuleValue* best = &values.front();
  for (const auto& value : values)
    if (lex_compare_at(value, *best, start) > 0) best = &value;
  std::vector<DecisionRule> out;
  for (const auto& value : values)
    if (lex_compare_at(value, *best, start) == 0) out.push_back(value.rule);
  return out;  // enumeration order is lexicographic already
}

std::vector<DecisionRule> find_blackwell_optimal_all_states(const Mdp& mdp,
                                                            std::uint64_t cap) {
  const auto values = all_rule_values(mdp, cap);
  const std::size_t n = mdp.num_states();
  std::vector<const RuleValue*> best_at(n, &values.front());
  for (const auto& value : values)
    for (std::size_t s = 0; s < n; ++s)
      if (lex_compare_at(value, *best_at[s], s) > 0) best_at[s] = &value;

  std::vector<DecisionRule> out;
  for (const auto& value : values) {
    bool maximal_everywhere = true;
    for (std::size_t s = 0; s < n && maximal_everywhere; ++s)
      maximal_everywhere = lex_compare_at(value, *best_at[s], s) == 0;
    if (maximal_everywhere) out.push_back(value.rule);
  }
  if (out.empty())
    throw InternalError(
        "no rule is simultaneously maximal at every state; this contradicts the existence "
        "of a discount-optimal stationary rule and indicates a bug");
  return out;
}

}  // namespace blackwell
