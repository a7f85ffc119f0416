#pragma once

#include <vector>

#include "blackwell/matrix.hpp"

namespace blackwell {

/// Communication structure of a stochastic matrix: closed strongly connected
/// classes, the remaining transient states, and cyclic periods.
struct ChainStructure {
  std::vector<std::vector<int>> recurrent_classes;  // each sorted; classes sorted by minimum
  std::vector<int> transient_states;                // sorted
  std::vector<int> class_periods;                   // parallel to recurrent_classes
  int global_period = 1;                            // lcm of class periods
};

ChainStructure chain_structure(const RatMatrix& p);

/// Exact Cesaro limit of the matrix powers and whether plain powers converge.
struct LimitData {
  RatMatrix limiting_matrix;  // Q*
  bool aperiodic = false;     // true iff global period is 1
};

/// Q* = lim (1/n) sum_{t<n} P^t, assembled from per-class stationary
/// distributions and transient absorption probabilities, all solved exactly.
LimitData limiting_matrix(const RatMatrix& p);

/// The exact periodic orbit that P^t r approaches: vectors C_0..C_{p-1} with
/// C_j = (P^p)* P^j r, so P^t r - C_{t mod p} -> 0 and P C_j = C_{(j+1) mod p}.
std::vector<RatVector> cycle_limit_vectors(const RatMatrix& p, const RatVector& r,
                                           const ChainStructure& structure);

/// Test hook: asserts Q*Q = QQ* = Q*Q* = Q* and row sums exactly 1.
/// Throws InternalError on violation.
void verify_limit_identities(const RatMatrix& p, const RatMatrix& qstar);

}  // namespace blackwell
