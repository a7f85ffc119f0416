#include "blackwell/matrix.hpp"

#include <numeric>
#include <string>
#include <utility>

namespace blackwell {

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_rows(std::initializer_list<std::initializer_list<Rational>> rows) {
  std::vector<RatVector> copied;
  copied.reserve(rows.size());
  for (const auto& row : rows) copied.emplace_back(row);
  return from_rows(copied);
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows) {
  if (rows.empty()) return {};
  RatMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw std::invalid_argument("from_rows: ragged rows");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: dimension mismatch");
  RatMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rational& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (b(k, j) == 0) continue;
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix sum: dimension mismatch");
  RatMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix difference: dimension mismatch");
  RatMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

RatVector operator*(const RatMatrix& a, const RatVector& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector: dimension mismatch");
  RatVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Rational acc;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) == 0 || x[j] == 0) continue;
      acc += a(i, j) * x[j];
    }
    out[i] = std::move(acc);
  }
  return out;
}

RatVector row_times(const RatVector& row, const RatMatrix& a) {
  if (row.size() != a.rows()) throw std::invalid_argument("vector-matrix: dimension mismatch");
  RatVector out(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (row[i] == 0) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      out[j] += row[i] * a(i, j);
    }
  }
  return out;
}

RatMatrix mat_pow(const RatMatrix& a, unsigned long exponent) {
  if (a.rows() != a.cols()) throw std::invalid_argument("mat_pow: matrix not square");
  RatMatrix result = RatMatrix::identity(a.rows());
  RatMatrix base = a;
  while (exponent > 0) {
    if (exponent & 1UL) result = result * base;
    exponent >>= 1UL;
    if (exponent > 0) base = base * base;
  }
  return result;
}

bool is_stochastic(const RatMatrix& a) {
  if (a.rows() == 0 || a.rows() != a.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Rational sum;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) < 0 || a(i, j) > 1) return false;
      sum += a(i, j);
    }
    if (sum != 1) return false;
  }
  return true;
}

ExactLu::ExactLu(RatMatrix a) : lu_(std::move(a)) {
  if (lu_.rows() != lu_.cols()) throw std::invalid_argument("ExactLu: matrix not square");
  const std::size_t n = lu_.rows();
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && lu_(pivot, col) == 0) ++pivot;
    if (pivot == n)
      throw SingularMatrixError(
          "singular system: no pivot in column " + std::to_string(col + 1), col);
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu_(pivot, c), lu_(col, c));
      std::swap(perm_[pivot], perm_[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      if (lu_(r, col) == 0) continue;
      Rational factor = lu_(r, col) / lu_(col, col);
      lu_(r, col) = factor;
      for (std::size_t c = col + 1; c < n; ++c) {
        if (lu_(col, c) == 0) continue;
        lu_(r, c) -= factor * lu_(col, c);
      }
    }
  }
}

RatVector ExactLu::solve(const RatVector& b) const {
  const std::size_t n = dim();
  if (b.size() != n) throw std::invalid_argument("ExactLu::solve: dimension mismatch");

  RatVector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational acc = b[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) {
      if (lu_(i, j) == 0 || y[j] == 0) continue;
      acc -= lu_(i, j) * y[j];
    }
    y[i] = std::move(acc);
  }

  RatVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Rational acc = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) {
      if (lu_(ii, j) == 0 || x[j] == 0) continue;
      acc -= lu_(ii, j) * x[j];
    }
    x[ii] = acc / lu_(ii, ii);
  }
  return x;
}

RatVector solve_exact(const RatMatrix& a, const RatVector& b) {
  return ExactLu(a).solve(b);
}

}  // namespace blackwell
