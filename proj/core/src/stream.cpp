#include "blackwell/stream.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace blackwell {

EpStream EpStream::constant(Rational value) {
  EpStream s;
  s.cycle_ = {std::move(value)};
  return s;
}

EpStream EpStream::make(std::vector<Rational> prefix, std::vector<Rational> cycle) {
  if (cycle.empty()) throw ValidationError("EpStream cycle must be nonempty");
  EpStream s;
  s.prefix_ = std::move(prefix);
  s.cycle_ = std::move(cycle);
  s.canonicalize();
  return s;
}

void EpStream::canonicalize() {
  // Shortest cycle first.
  const auto length = static_cast<std::int64_t>(cycle_.size());
  for (std::int64_t d = 1; d < length; ++d) {
    if (length % d != 0) continue;
    bool repeats = true;
    for (std::int64_t i = d; i < length && repeats; ++i)
      repeats = cycle_[static_cast<std::size_t>(i)] == cycle_[static_cast<std::size_t>(i % d)];
    if (repeats) {
      cycle_.resize(static_cast<std::size_t>(d));
      break;
    }
  }
  // Absorb matching prefix entries by rotating the cycle backwards; a pure
  // cycle therefore always ends up with an empty prefix.
  while (!prefix_.empty() && prefix_.back() == cycle_.back()) {
    std::rotate(cycle_.rbegin(), cycle_.rbegin() + 1, cycle_.rend());
    prefix_.pop_back();
  }
}

const Rational& EpStream::at(std::int64_t t) const {
  const auto m = prefix_length();
  if (t <= m) return prefix_[static_cast<std::size_t>(t - 1)];
  return cycle_[static_cast<std::size_t>((t - m - 1) % period())];
}

std::vector<Rational> EpStream::window(std::int64_t n) const {
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t t = 1; t <= n; ++t) out.push_back(at(t));
  return out;
}

EpStream add(const EpStream& u, const EpStream& v) {
  const std::int64_t m = std::max(u.prefix_length(), v.prefix_length());
  const std::int64_t joint = std::lcm(u.period(), v.period());
  std::vector<Rational> prefix;
  prefix.reserve(static_cast<std::size_t>(m));
  for (std::int64_t t = 1; t <= m; ++t) prefix.push_back(u.at(t) + v.at(t));
  std::vector<Rational> cycle;
  cycle.reserve(static_cast<std::size_t>(joint));
  for (std::int64_t t = m + 1; t <= m + joint; ++t) cycle.push_back(u.at(t) + v.at(t));
  return EpStream::make(std::move(prefix), std::move(cycle));
}

EpStream negate(const EpStream& u) {
  std::vector<Rational> prefix;
  prefix.reserve(u.prefix().size());
  for (const auto& x : u.prefix()) prefix.push_back(-x);
  std::vector<Rational> cycle;
  cycle.reserve(u.cycle().size());
  for (const auto& x : u.cycle()) cycle.push_back(-x);
  return EpStream::make(std::move(prefix), std::move(cycle));
}

EpStream subtract(const EpStream& u, const EpStream& v) { return add(u, negate(v)); }

EpStream prepend(const Rational& c, const EpStream& u) {
  std::vector<Rational> prefix;
  prefix.reserve(u.prefix().size() + 1);
  prefix.push_back(c);
  prefix.insert(prefix.end(), u.prefix().begin(), u.prefix().end());
  return EpStream::make(std::move(prefix), u.cycle());
}

Rational long_run_average(const EpStream& u) {
  Rational sum;
  for (const auto& x : u.cycle()) sum += x;
  return sum / u.period();
}

bool dominates(const EpStream& u, const EpStream& v) {
  const std::int64_t window =
      std::max(u.prefix_length(), v.prefix_length()) + std::lcm(u.period(), v.period());
  bool strict = false;
  for (std::int64_t t = 1; t <= window; ++t) {
    const int order = cmp(u.at(t), v.at(t));
    if (order < 0) return false;
    if (order > 0) strict = true;
  }
  return strict;
}

CesaroResult cesaro_of_partial_sums(const EpStream& d) {
  Rational cycle_sum;
  for (const auto& x : d.cycle()) cycle_sum += x;
  if (cycle_sum > 0) return {CesaroResult::Kind::diverges_plus, {}};
  if (cycle_sum < 0) return {CesaroResult::Kind::diverges_minus, {}};

  // Zero cycle sum: partial sums repeat with the cycle's period once past the
  // prefix; the running average converges to their cycle mean.
  const std::int64_t m = d.prefix_length();
  const std::int64_t p = d.period();
  Rational running;
  Rational accumulated;
  for (std::int64_t t = 1; t <= m + p; ++t) {
    running += d.at(t);
    if (t > m) accumulated += running;
  }
  return {CesaroResult::Kind::value, accumulated / p};
}

namespace {

/// log2 of a positive rational, robust to double under/overflow.
double log2_of(const Rational& value) {
  long num_exp = 0;
  long den_exp = 0;
  const double num = mpz_get_d_2exp(&num_exp, value.get_num().get_mpz_t());
  const double den = mpz_get_d_2exp(&den_exp, value.get_den().get_mpz_t());
  return (std::log2(std::fabs(num)) + static_cast<double>(num_exp)) -
         (std::log2(std::fabs(den)) + static_cast<double>(den_exp));
}

/// Exact check of |tail[t]| <= peak * q^floor((t - onset)/p) for all t >= onset.
bool envelope_holds(const std::vector<Rational>& tail, std::int64_t onset, int period,
                    const Rational& peak, const Rational& q) {
  Rational bound = peak;
  std::int64_t next_step = onset + period;
  for (std::int64_t t = onset; t <= static_cast<std::int64_t>(tail.size()); ++t) {
    if (t == next_step) {
      bound *= q;
      next_step += period;
    }
    if (abs_of(tail[static_cast<std::size_t>(t - 1)]) > bound) return false;
  }
  return true;
}

}  // namespace

std::pair<Rational, std::int64_t> fit_decay_certificate(const std::vector<Rational>& tail,
                                                        int period) {
  // The tail of an asymptotically periodic stream obeys a geometric envelope
  // |tail[t]| <= M q^floor((t - onset)/p), but not a per-index ratio bound:
  // complex chain eigenvalues make the samples oscillate through near-zeros,
  // so |tail[t+p]| / |tail[t]| spikes arbitrarily at any horizon. The
  // envelope requirement q >= (|tail[t]| / M)^(p/(t - onset)) is estimated in
  // floats (via log2 to survive tiny rationals) and then verified exactly;
  // only the exact check admits a certificate.
  const auto horizon = static_cast<std::int64_t>(tail.size());
  const std::int64_t p = period;
  constexpr long kGrid = 4096;  // q is a multiple of 1/4096

  for (std::int64_t onset = 1; onset + 2 * p - 1 <= horizon; ++onset) {
    Rational peak;
    for (std::int64_t t = onset; t < onset + p; ++t)
      peak = std::max(peak, abs_of(tail[static_cast<std::size_t>(t - 1)]));

    if (peak == 0) {
      bool all_zero = true;
      for (std::int64_t t = onset; t <= horizon && all_zero; ++t)
        all_zero = tail[static_cast<std::size_t>(t - 1)] == 0;
      if (all_zero) return {rational(1, 2), onset};  // zero tail: any q works
      continue;
    }

    double required_log2 = -std::numeric_limits<double>::infinity();
    for (std::int64_t t = onset + p; t <= horizon; ++t) {
      const Rational& sample = tail[static_cast<std::size_t>(t - 1)];
      if (sample == 0) continue;
      const auto block = (t - onset) / p;
      required_log2 =
          std::max(required_log2, (log2_of(abs_of(sample)) - log2_of(peak)) /
                                      static_cast<double>(block));
    }

    long grid_point;
    if (std::isinf(required_log2))
      grid_point = kGrid / 2;  // everything past the first period is zero
    else
      grid_point = static_cast<long>(std::ceil(std::exp2(required_log2) * kGrid));
    grid_point = std::max(grid_point, 1L);

    // Float guidance may be off by an ulp or two; the exact envelope check
    // decides, nudging q upward as needed.
    while (grid_point < kGrid) {
      const Rational q = rational(grid_point, kGrid);
      if (envelope_holds(tail, onset, period, peak, q)) return {q, onset};
      grid_point += std::max(1L, grid_point / 512);
    }
  }
  throw CertificateError("no geometric decay ratio q < 1 fits the sampled tail; horizon " +
                         std::to_string(horizon) + " too small");
}

RatVector stream_samples(const StationaryStream& u, std::int64_t horizon) {
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  RatVector row(u.num_states());
  row[u.start] = 1;
  RatVector out;
  out.reserve(static_cast<std::size_t>(horizon));
  for (std::int64_t t = 1; t <= horizon; ++t) {
    Rational value;
    for (std::size_t s = 0; s < u.num_states(); ++s) {
      if (row[s] == 0 || u.reward[s] == 0) continue;
      value += row[s] * u.reward[s];
    }
    out.push_back(std::move(value));
    if (t < horizon) row = row_times(row, u.transition);
  }
  return out;
}

std::int64_t default_decompose_horizon(const StationaryStream& u) {
  const auto structure = chain_structure(u.transition);
  const auto p = static_cast<std::int64_t>(structure.global_period);
  return std::max<std::int64_t>(static_cast<std::int64_t>(u.num_states()) * p + 2 * p, 64);
}

Decomposition decompose(const StationaryStream& u, std::int64_t horizon) {
  const ChainStructure structure = chain_structure(u.transition);
  const auto p = static_cast<std::int64_t>(structure.global_period);
  const std::int64_t min_horizon = static_cast<std::int64_t>(u.num_states()) * p + 2 * p;
  if (horizon < min_horizon)
    throw ValidationError("decompose horizon " + std::to_string(horizon) +
                          " too small: need at least " + std::to_string(min_horizon));

  const auto orbit = cycle_limit_vectors(u.transition, u.reward, structure);
  std::vector<Rational> cycle;
  cycle.reserve(orbit.size());
  for (const auto& vec : orbit) cycle.push_back(vec[u.start]);
  EpStream periodic = EpStream::make({}, std::move(cycle));

  const RatVector samples = stream_samples(u, horizon);
  std::vector<Rational> tail;
  tail.reserve(samples.size());
  for (std::int64_t t = 1; t <= horizon; ++t)
    tail.push_back(samples[static_cast<std::size_t>(t - 1)] - periodic.at(t));

  auto [ratio, onset] = fit_decay_certificate(tail, structure.global_period);
  return Decomposition{std::move(periodic), structure.global_period, std::move(tail),
                       std::move(ratio), onset};
}

Decomposition decompose(const StationaryStream& u) {
  return decompose(u, default_decompose_horizon(u));
}

StationaryStream ep_to_stat(const EpStream& u) {
  const auto m = static_cast<std::size_t>(u.prefix_length());
  const auto cycle_len = static_cast<std::size_t>(u.period());
  const std::size_t n = m + cycle_len;
  RatMatrix p(n, n);
  RatVector r(n);
  for (std::size_t i = 0; i < m; ++i) {
    r[i] = u.prefix()[i];
    p(i, i + 1) = 1;
  }
  for (std::size_t j = 0; j < cycle_len; ++j) {
    r[m + j] = u.cycle()[j];
    p(m + j, j + 1 < cycle_len ? m + j + 1 : m) = 1;
  }
  return StationaryStream(std::move(p), std::move(r), 0);
}

StationaryStream prepend_stat(const StationaryStream& u, const Rational& c) {
  const std::size_t n = u.num_states();
  RatMatrix p(n + 1, n + 1);
  RatVector r(n + 1);
  r[0] = c;
  p(0, u.start + 1) = 1;
  for (std::size_t i = 0; i < n; ++i) {
    r[i + 1] = u.reward[i];
    for (std::size_t j = 0; j < n; ++j) p(i + 1, j + 1) = u.transition(i, j);
  }
  return StationaryStream(std::move(p), std::move(r), 0);
}

StationaryStream stat_plus_ep(const StationaryStream& u, const EpStream& alpha) {
  const std::size_t S = u.num_states();
  const auto m = static_cast<std::size_t>(alpha.prefix_length());
  const auto cycle_len = static_cast<std::size_t>(alpha.period());
  const std::size_t phases = m + cycle_len;

  auto index_of = [&](std::size_t s, std::size_t ph) { return s * phases + ph; };
  auto next_phase = [&](std::size_t ph) { return ph + 1 < phases ? ph + 1 : m; };
  auto alpha_at_phase = [&](std::size_t ph) {
    return ph < m ? alpha.prefix()[ph] : alpha.cycle()[ph - m];
  };

  RatMatrix p(S * phases, S * phases);
  RatVector r(S * phases);
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t ph = 0; ph < phases; ++ph) {
      r[index_of(s, ph)] = u.reward[s] + alpha_at_phase(ph);
      for (std::size_t s2 = 0; s2 < S; ++s2) {
        const Rational& prob = u.transition(s, s2);
        if (prob == 0) continue;
        p(index_of(s, ph), index_of(s2, next_phase(ph))) = prob;
      }
    }
  return StationaryStream(std::move(p), std::move(r), index_of(u.start, 0));
}

}  // namespace blackwell
