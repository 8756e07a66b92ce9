#include "sulfex/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sulfex/random.hpp"

namespace sulfex {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix entries " + std::to_string(entries_.size()) + " != " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::from_rows(std::span<const Vector> rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) throw Error(ErrorCode::DimensionMismatch, "rows differ in length");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

Vector Matrix::column(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

bool Matrix::all_finite() const { return num::all_finite(entries_); }

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::abs(v));
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

namespace num {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot product of unequal lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "matvec");
  Vector y(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) y[r] = dot(a.row(r), x);
  return y;
}

Vector transpose_matvec(const Matrix& a, std::span<const double> x) {
  if (a.rows() != x.size()) throw Error(ErrorCode::DimensionMismatch, "transpose_matvec");
  Vector y(a.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) y[c] += a(r, c) * x[r];
  return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matmul");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

namespace {

double gram_entry(const Matrix& x, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) s += x(r, i) * x(r, j);
  return s;
}

}  // namespace

Matrix gram_serial(const Matrix& x) {
  const std::size_t p = x.cols();
  Matrix g(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) {
      g(i, j) = gram_entry(x, i, j);
      g(j, i) = g(i, j);
    }
  return g;
}

Matrix gram(const Matrix& x) {
  const std::size_t p = x.cols();
  Matrix g(p, p);
  const auto pairs = static_cast<std::ptrdiff_t>(p * p);
#pragma omp parallel for schedule(static) if (x.rows() * p > 4096)
  for (std::ptrdiff_t idx = 0; idx < pairs; ++idx) {
    const auto i = static_cast<std::size_t>(idx) / p;
    const auto j = static_cast<std::size_t>(idx) % p;
    // lower triangle mirrors the upper one, as in gram_serial
    if (j >= i) g(i, j) = gram_entry(x, i, j);
  }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

namespace {

void check_square_symmetric(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": matrix not square");
  if (!a.all_finite()) throw Error(ErrorCode::NonFiniteValue, std::string(what) + ": non-finite matrix entry");
  const double tol = 1e-10 * std::max(1.0, a.max_abs());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol)
        throw Error(ErrorCode::InvalidArgument, std::string(what) + ": matrix not symmetric");
}

struct LuFactor {
  Matrix lu;
  std::vector<std::size_t> perm;
};

LuFactor lu_factor(const Matrix& a) {
  const std::size_t n = a.rows();
  LuFactor f{a, std::vector<std::size_t>(n)};
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
  const double pivot_floor = 1e-12 * a.max_abs();
  auto& m = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
    if (std::abs(m(p, k)) <= pivot_floor || m(p, k) == 0.0)
      throw Error(ErrorCode::SingularMatrix, "pivot " + std::to_string(k) + " below 1e-12 * max|A|");
    if (p != k) {
      std::swap_ranges(m.row(k).begin(), m.row(k).end(), m.row(p).begin());
      std::swap(f.perm[k], f.perm[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = m(i, k) / m(k, k);
      m(i, k) = l;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
    }
  }
  return f;
}

Vector lu_solve(const LuFactor& f, std::span<const double> b) {
  const std::size_t n = b.size();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
    x[i] /= f.lu(i, i);
  }
  return x;
}

Vector residual(const Matrix& a, std::span<const double> x, std::span<const double> b) {
  Vector r(b.begin(), b.end());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    // long double accumulation keeps the refinement step meaningful
    long double s = 0.0L;
    for (std::size_t j = 0; j < a.cols(); ++j) s += static_cast<long double>(a(i, j)) * x[j];
    r[i] = static_cast<double>(static_cast<long double>(b[i]) - s);
  }
  return r;
}

}  // namespace

Vector solve_symmetric(const Matrix& a, std::span<const double> b) {
  check_square_symmetric(a, "solve_symmetric");
  if (b.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "solve_symmetric: rhs length");
  if (!all_finite(b)) throw Error(ErrorCode::NonFiniteValue, "solve_symmetric: non-finite rhs");
  if (a.rows() == 0) return {};

  const LuFactor f = lu_factor(a);
  Vector x = lu_solve(f, b);
  const double bound = 1e-8 * (1.0 + norm_inf(b));
  for (int step = 0; step < 4; ++step) {
    const Vector r = residual(a, x, b);
    if (norm_inf(r) <= 1e-3 * bound && step > 0) break;
    const Vector dx = lu_solve(f, r);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
  }
  if (!all_finite(x) || norm_inf(residual(a, x, b)) > bound)
    throw Error(ErrorCode::SingularMatrix, "residual bound not met; matrix numerically singular");
  return x;
}

void apply_sign_convention(Vector& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  if (!v.empty() && v[best] < 0.0)
    for (double& e : v) e = -e;
}

namespace {

bool normalize(Vector& v) {
  const double n = norm2(v);
  if (!(n > 0.0) || !std::isfinite(n)) return false;
  for (double& e : v) e /= n;
  return true;
}

Vector random_unit(Rng& rng, std::size_t n) {
  Vector v(n);
  do {
    for (double& e : v) e = rng.normal();
  } while (!normalize(v));
  return v;
}

double eigen_residual(const Matrix& s, const Vector& v, double lambda) {
  const Vector sv = matvec(s, v);
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r = std::max(r, std::abs(sv[i] - lambda * v[i]));
  return r;
}

}  // namespace

EigenPair dominant_eigenpair(const Matrix& s, double tol, std::size_t max_iter, std::uint64_t seed) {
  check_square_symmetric(s, "dominant_eigenpair");
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "dominant_eigenpair: max_iter must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "dominant_eigenpair: tol must be positive");
  const std::size_t n = s.rows();
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "dominant_eigenpair: empty matrix");

  Rng rng(seed);
  EigenPair out;
  out.vector = random_unit(rng, n);

  const double scale = s.max_abs();
  if (scale == 0.0) {
    apply_sign_convention(out.vector);
    out.iterations = 1;
    return out;
  }

  Matrix accel = s;
  for (double& e : accel.entries()) e /= scale;
  int squarings = 0;

  for (std::size_t it = 1; it <= max_iter; ++it) {
    Vector w = matvec(accel, out.vector);
    if (!normalize(w)) w = random_unit(rng, n);  // start vector landed in the null space
    Vector v = matvec(s, w);
    if (!normalize(v)) v = w;
    out.vector = std::move(v);
    out.value = dot(out.vector, matvec(s, out.vector));
    out.iterations = it;

    if (eigen_residual(s, out.vector, out.value) <= tol) {
      if (out.value < -tol) throw Error(ErrorCode::InvalidArgument, "dominant_eigenpair: matrix not PSD");
      out.value = std::max(0.0, out.value);
      apply_sign_convention(out.vector);
      return out;
    }
    if (it % 4 == 0 && squarings < 64) {
      accel = matmul(accel, accel);
      const double m = accel.max_abs();
      if (m > 0.0)
        for (double& e : accel.entries()) e /= m;
      ++squarings;
    }
  }
  apply_sign_convention(out.vector);
  throw EigenNoConvergence("residual " + std::to_string(eigen_residual(s, out.vector, out.value)) +
                               " above tol after " + std::to_string(max_iter) + " iterations",
                           out);
}

}  // namespace num
}  // namespace sulfex
