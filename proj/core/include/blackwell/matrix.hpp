#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "blackwell/error.hpp"
#include "blackwell/rational.hpp"

namespace blackwell {

using RatVector = std::vector<Rational>;

/// Dense matrix of exact rationals with value semantics.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RatMatrix identity(std::size_t n);
  static RatMatrix from_rows(std::initializer_list<std::initializer_list<Rational>> rows);
  static RatMatrix from_rows(const std::vector<RatVector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool operator==(const RatMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);

/// a * x with x a column vector.
RatVector operator*(const RatMatrix& a, const RatVector& x);

/// row * a with row a row vector (the forward step of stream generation).
RatVector row_times(const RatVector& row, const RatMatrix& a);

RatMatrix mat_pow(const RatMatrix& a, unsigned long exponent);

/// Exact check: square, entries in [0,1], every row sums to 1.
bool is_stochastic(const RatMatrix& a);

/// PLU factorization over the rationals with first-nonzero pivoting.
/// Factoring is O(n^3) exact operations; each solve is O(n^2).
class ExactLu {
 public:
  /// Throws SingularMatrixError naming the first all-zero pivot column.
  explicit ExactLu(RatMatrix a);

  RatVector solve(const RatVector& b) const;
  std::size_t dim() const { return lu_.rows(); }

 private:
  RatMatrix lu_;
  std::vector<std::size_t> perm_;
};

/// One-shot exact solve of a x = b for nonsingular a.
RatVector solve_exact(const RatMatrix& a, const RatVector& b);

}  // namespace blackwell
