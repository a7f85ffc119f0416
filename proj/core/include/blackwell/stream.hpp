#pragma once

#include <cstdint>
#include <vector>

#include "blackwell/chain.hpp"
#include "blackwell/mdp.hpp"

namespace blackwell {

/// An eventually periodic rational sequence: a finite prefix followed by a
/// repeating cycle. Kept in canonical form, so two EpStreams are equal as
/// values exactly when they are equal as sequences:
///   - the cycle is not a repetition of a shorter cycle;
///   - the prefix is minimal (whenever its last entry matches the cycle entry
///     it would align with, the entry is absorbed by rotating the cycle).
/// In particular, a purely cyclic stream always has an empty prefix.
class EpStream {
 public:
  /// The zero stream.
  EpStream() : cycle_{Rational(0)} {}

  static EpStream constant(Rational value);

  /// Canonicalizes; throws ValidationError on an empty cycle.
  static EpStream make(std::vector<Rational> prefix, std::vector<Rational> cycle);

  const std::vector<Rational>& prefix() const { return prefix_; }
  const std::vector<Rational>& cycle() const { return cycle_; }

  std::int64_t prefix_length() const { return static_cast<std::int64_t>(prefix_.size()); }
  std::int64_t period() const { return static_cast<std::int64_t>(cycle_.size()); }

  /// Value at 1-based time t.
  const Rational& at(std::int64_t t) const;

  /// First n values.
  std::vector<Rational> window(std::int64_t n) const;

  bool operator==(const EpStream&) const = default;

 private:
  std::vector<Rational> prefix_;
  std::vector<Rational> cycle_;

  void canonicalize();
};

EpStream add(const EpStream& u, const EpStream& v);
EpStream negate(const EpStream& u);
EpStream subtract(const EpStream& u, const EpStream& v);

/// The stream (c, u_1, u_2, ...).
EpStream prepend(const Rational& c, const EpStream& u);

/// Mean of one cycle; the prefix cannot affect the limit.
Rational long_run_average(const EpStream& u);

/// u >= v everywhere with a strict inequality somewhere. One prefix window
/// plus one joint cycle decides it.
bool dominates(const EpStream& u, const EpStream& v);

/// Limit behaviour of the running averages (1/n) sum_{T<=n} S_T of the
/// partial sums S_T of d.
struct CesaroResult {
  enum class Kind { diverges_plus, diverges_minus, value };
  Kind kind = Kind::value;
  Rational value;  // meaningful only when kind == value

  bool operator==(const CesaroResult&) const = default;
};

/// Decided by the cycle sum of d: positive/negative cycle sums force the
/// partial sums to +/- infinity, a zero cycle sum makes the partial sums
/// eventually periodic and the result is their exact cycle mean.
CesaroResult cesaro_of_partial_sums(const EpStream& d);

/// Split of a stationary stream into an exactly periodic part and an
/// exponentially vanishing tail, with a geometric-envelope certificate
/// verified exactly on every sample:
///   |tail[t]| <= M * decay_ratio^floor((t - onset) / period)
/// for all sampled t >= onset, where M is the largest |tail| over the first
/// period at the onset. (A per-index ratio bound would be false in general:
/// complex chain eigenvalues make the tail oscillate through near-zeros.)
struct Decomposition {
  EpStream periodic_part;    // empty prefix by construction
  int period = 1;            // global period of the chain
  std::vector<Rational> tail;  // tail[t-1] = u_t - w_t, t = 1..horizon
  Rational decay_ratio;      // q in (0,1)
  std::int64_t onset = 1;    // T0, 1-based
};

/// Requires horizon >= S*period + 2*period. The periodic part is the exact
/// orbit of the chain's limit cycle extended back to t = 1, so the tail
/// absorbs all transient behaviour. Throws CertificateError when no q < 1
/// fits the sampled tail (the horizon was too small).
Decomposition decompose(const StationaryStream& u, std::int64_t horizon);

/// Decomposition at the default horizon max(S*p + 2p, 64).
Decomposition decompose(const StationaryStream& u);

std::int64_t default_decompose_horizon(const StationaryStream& u);

/// Fits (q, T0): scans onsets forward until a geometric envelope with some
/// q < 1 (the smallest feasible multiple of 1/4096) covers every sample; an
/// all-zero tail certifies with q = 1/2. Exposed for direct testing.
std::pair<Rational, std::int64_t> fit_decay_certificate(const std::vector<Rational>& tail,
                                                        int period);

/// Exact samples u_1..u_horizon of a stationary stream.
RatVector stream_samples(const StationaryStream& u, std::int64_t horizon);

/// Realizes an eventually periodic stream as a stationary stream on a
/// deterministic prefix-path-plus-cycle chain whose rewards are the stream
/// values. Exactness is preserved.
StationaryStream ep_to_stat(const EpStream& u);

/// The stream (c, u_1, u_2, ...) as a stationary stream: one injected start
/// state with reward c feeding the original chain.
StationaryStream prepend_stat(const StationaryStream& u, const Rational& c);

/// Pointwise sum of a stationary stream and an eventually periodic stream,
/// realized on the product of the chain with the phase cycle of alpha.
StationaryStream stat_plus_ep(const StationaryStream& u, const EpStream& alpha);

}  // namespace blackwell
