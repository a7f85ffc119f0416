#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace blackwell {

/// Root of the library's exception hierarchy.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rejected input data (bad MDP description, bad policy, bad horizon, ...).
/// Coordinates are 1-based where present; -1 means "not applicable".
struct ValidationError : Error {
  ValidationError(const std::string& message, std::string action_name = {},
                  int state_index = -1, int column_index = -1)
      : Error(message),
        action(std::move(action_name)),
        state(state_index),
        column(column_index) {}

  std::string action;
  int state = -1;
  int column = -1;
};

/// Exhaustive rule enumeration would exceed the configured cap.
struct CapExceededError : Error {
  CapExceededError(const std::string& message, mpz_class rule_count)
      : Error(message), count(std::move(rule_count)) {}

  mpz_class count;
};

/// Exact elimination hit an all-zero pivot column.
struct SingularMatrixError : Error {
  SingularMatrixError(const std::string& message, std::size_t zero_pivot_column)
      : Error(message), column(zero_pivot_column) {}

  std::size_t column;  // 0-based
};

/// No geometric decay ratio q < 1 fits the sampled tail; the sampling
/// horizon was too small.
struct CertificateError : Error {
  using Error::Error;
};

/// A mathematical invariant the library guarantees was violated; always a bug.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace blackwell
