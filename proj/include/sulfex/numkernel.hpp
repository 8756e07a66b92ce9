#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "sulfex/error.hpp"

namespace sulfex {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Throws DimensionMismatch unless entries.size() == rows * cols.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);
  /// Every row must have the same length.
  static Matrix from_rows(std::span<const Vector> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {entries_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }
  Vector column(std::size_t c) const;

  std::span<const double> entries() const noexcept { return entries_; }
  std::span<double> entries() noexcept { return entries_; }

  bool all_finite() const;
  double max_abs() const;
  Matrix transposed() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

namespace num {

// Small helpers shared by the statistical modules.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
bool all_finite(std::span<const double> a);
Vector matvec(const Matrix& a, std::span<const double> x);
/// aᵀ x
Vector transpose_matvec(const Matrix& a, std::span<const double> x);
Matrix matmul(const Matrix& a, const Matrix& b);

/// Gram matrix XᵀX. The parallel version splits the output entries across
/// OpenMP threads; each entry is accumulated in the same order as in
/// gram_serial, so both return bit-identical results.
Matrix gram(const Matrix& x);
Matrix gram_serial(const Matrix& x);

/// Solves A x = b for symmetric A by LU with partial pivoting plus
/// iterative refinement.
///
/// Throws DimensionMismatch, NonFiniteValue, InvalidArgument (A not
/// symmetric within 1e-10), or SingularMatrix when a pivot falls below
/// 1e-12 * max|A| or the refined residual cannot meet
/// ‖Ax − b‖∞ ≤ 1e-8 (1 + ‖b‖∞).
Vector solve_symmetric(const Matrix& a, std::span<const double> b);

struct EigenPair {
  double value = 0.0;
  Vector vector;
  std::size_t iterations = 0;
};

/// Thrown when dominant_eigenpair misses its tolerance; carries the last iterate.
class EigenNoConvergence : public Error {
 public:
  EigenNoConvergence(const std::string& detail, EigenPair last)
      : Error(ErrorCode::NoConvergence, detail), last_(std::move(last)) {}
  const EigenPair& last_iterate() const noexcept { return last_; }

 private:
  EigenPair last_;
};

/// Dominant eigenpair of a symmetric positive semi-definite matrix by power
/// iteration from a seeded random start. Every few steps the iteration matrix
/// is squared (and renormalised), so small spectral gaps cost O(log) extra
/// work instead of O(1/gap). The residual is always measured against S.
///
/// Post: ‖v‖₂ = 1, ‖S v − λ v‖∞ ≤ tol, λ ≥ 0, largest-magnitude entry of v
/// positive (first such entry on exact ties).
EigenPair dominant_eigenpair(const Matrix& s, double tol, std::size_t max_iter, std::uint64_t seed);

/// Flips v so that its largest-magnitude entry is positive.
void apply_sign_convention(Vector& v);

}  // namespace num
}  // namespace sulfex
