#include "sulfex/pca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sulfex/random.hpp"

namespace sulfex::pca {

CenteredData center_and_scale(const Matrix& x, bool standardize) {
  const std::size_t n = x.rows();
  if (n < 2) throw Error(ErrorCode::TooFewRows, "PCA needs at least 2 rows, got " + std::to_string(n));
  if (!x.all_finite()) throw Error(ErrorCode::NonFiniteValue, "PCA input has non-finite entries");
  CenteredData out{x, Vector(x.cols(), 0.0), Vector(x.cols(), 1.0)};
  for (std::size_t c = 0; c < x.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += x(r, c);
    mean /= static_cast<double>(n);
    out.means[c] = mean;
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      out.data(r, c) = x(r, c) - mean;
      ss += out.data(r, c) * out.data(r, c);
    }
    if (!standardize) continue;
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    // a column constant up to rounding is treated as constant
    if (sd > 1e-12 * std::max(1.0, std::abs(mean))) {
      out.scales[c] = sd;
      for (std::size_t r = 0; r < n; ++r) out.data(r, c) /= sd;
    } else {
      for (std::size_t r = 0; r < n; ++r) out.data(r, c) = 0.0;
    }
  }
  return out;
}

namespace {

void orthogonalize(Vector& v, const std::vector<Vector>& basis) {
  // two passes of classical Gram-Schmidt
  for (int pass = 0; pass < 2; ++pass)
    for (const Vector& b : basis) {
      const double d = num::dot(v, b);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * b[i];
    }
}

void remove_component(Matrix& x, const Vector& w) {
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double score = num::dot(x.row(r), w);
    for (std::size_t c = 0; c < x.cols(); ++c) x(r, c) -= score * w[c];
  }
}

}  // namespace

Matrix deflate(const Matrix& x, const std::vector<Vector>& loadings) {
  Matrix out = x;
  for (const Vector& w : loadings) remove_component(out, w);
  return out;
}

PCAResult principal_components(const Matrix& x, std::size_t m, const PCAOptions& options) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (n < 2) throw Error(ErrorCode::TooFewRows, "PCA needs at least 2 rows");
  if (m < 1 || m > std::min(n - 1, p))
    throw Error(ErrorCode::InvalidArgument, "component count " + std::to_string(m) + " outside [1, " +
                                                std::to_string(std::min(n - 1, p)) + "]");
  if (!x.all_finite()) throw Error(ErrorCode::NonFiniteValue, "PCA input has non-finite entries");

  PCAResult res;
  double frob = 0.0;
  for (double v : x.entries()) frob += v * v;
  res.total_variance = frob / static_cast<double>(n - 1);

  Matrix deflated = x;
  for (std::size_t k = 0; k < m; ++k) {
    const Matrix g = num::gram(deflated);
    const double tol = options.tol * std::max(1.0, g.max_abs());
    num::EigenPair ep = num::dominant_eigenpair(g, tol, options.max_iter, derive_seed(options.seed, k));
    Vector w = std::move(ep.vector);
    // Rank-deficient tails give an arbitrary start vector back; force it into
    // the orthogonal complement of the loadings found so far.
    orthogonalize(w, res.loadings);
    const double norm = num::norm2(w);
    if (!(norm > 0.0)) throw Error(ErrorCode::NoConvergence, "PCA: loading collapsed during orthogonalisation");
    for (double& e : w) e /= norm;
    num::apply_sign_convention(w);

    const Vector scores = num::matvec(deflated, w);
    const double var = num::dot(scores, scores) / static_cast<double>(n - 1);
    res.explained_variance.push_back(var);
    res.explained_ratio.push_back(res.total_variance > 0.0 ? var / res.total_variance : 0.0);
    remove_component(deflated, w);
    res.loadings.push_back(std::move(w));
  }
  return res;
}

PCAResult analyze(const Matrix& x, std::size_t m, bool standardize, const PCAOptions& options) {
  CenteredData c = center_and_scale(x, standardize);
  PCAResult r = principal_components(c.data, m, options);
  r.means = std::move(c.means);
  r.scales = std::move(c.scales);
  return r;
}

std::vector<DominantVariable> select_dominant_variables(const PCAResult& result, std::size_t m) {
  if (m > result.loadings.size())
    throw Error(ErrorCode::InvalidArgument, "requested " + std::to_string(m) + " components, have " +
                                                std::to_string(result.loadings.size()));
  std::vector<DominantVariable> out;
  for (std::size_t k = 0; k < m; ++k) {
    const Vector& w = result.loadings[k];
    DominantVariable dv{k, 0, false, false};
    for (std::size_t i = 1; i < w.size(); ++i)
      if (std::abs(w[i]) > std::abs(w[dv.index])) dv.index = i;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (i != dv.index && std::abs(w[i]) == std::abs(w[dv.index])) dv.tie = true;
    dv.duplicate = std::any_of(out.begin(), out.end(), [&](const DominantVariable& o) { return o.index == dv.index; });
    out.push_back(dv);
  }
  return out;
}

}  // namespace sulfex::pca
