#include "sulfex/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "sulfex/random.hpp"

namespace sulfex::cluster {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::size_t nearest(std::span<const double> point, const Matrix& centroids) {
  std::size_t best = 0;
  double best_d = squared_distance(point, centroids.row(0));
  for (std::size_t c = 1; c < centroids.rows(); ++c) {
    const double d = squared_distance(point, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

void check_shapes(const Matrix& points, const Matrix& centroids) {
  if (centroids.rows() == 0) throw Error(ErrorCode::InvalidArgument, "assign_step: no centroids");
  if (points.cols() != centroids.cols())
    throw Error(ErrorCode::DimensionMismatch, "assign_step: points have dimension " + std::to_string(points.cols()) +
                                                  ", centroids " + std::to_string(centroids.cols()));
}

}  // namespace

std::vector<std::size_t> assign_step_serial(const Matrix& points, const Matrix& centroids) {
  check_shapes(points, centroids);
  std::vector<std::size_t> out(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) out[i] = nearest(points.row(i), centroids);
  return out;
}

std::vector<std::size_t> assign_step(const Matrix& points, const Matrix& centroids) {
  check_shapes(points, centroids);
  std::vector<std::size_t> out(points.rows());
  const auto n = static_cast<std::ptrdiff_t>(points.rows());
#pragma omp parallel for schedule(static) if (n > 2048)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = nearest(points.row(i), centroids);
  return out;
}

Matrix update_step(const Matrix& points, std::span<const std::size_t> assignments, const Matrix& centroids) {
  if (assignments.size() != points.rows())
    throw Error(ErrorCode::DimensionMismatch, "update_step: one assignment per point required");
  if (points.cols() != centroids.cols()) throw Error(ErrorCode::DimensionMismatch, "update_step: dimension");
  const std::size_t k = centroids.rows();
  Matrix sums(k, points.cols());
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const std::size_t c = assignments[i];
    if (c >= k) throw Error(ErrorCode::InvalidArgument, "update_step: assignment out of range");
    ++counts[c];
    for (std::size_t d = 0; d < points.cols(); ++d) sums(c, d) += points(i, d);
  }
  Matrix out = centroids;
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    for (std::size_t d = 0; d < points.cols(); ++d) out(c, d) = sums(c, d) / static_cast<double>(counts[c]);
  }
  return out;
}

double objective(const Matrix& points, std::span<const std::size_t> assignments, const Matrix& centroids) {
  double j = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) j += squared_distance(points.row(i), centroids.row(assignments[i]));
  return j;
}

namespace {

struct Move {
  std::size_t point, to;
};

// Best single-point transfer by exact objective change, accounting for both
// centroids shifting. Lloyd fixed points can still admit such moves.
std::optional<Move> improving_move(const Matrix& points, std::span<const std::size_t> assignments,
                                   const Matrix& centroids, std::span<const std::size_t> sizes, double objective) {
  const double tol = 1e-12 * std::max(1.0, objective);
  std::optional<Move> best;
  double best_change = -tol;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const std::size_t from = assignments[i];
    if (sizes[from] < 2) continue;
    const double nf = static_cast<double>(sizes[from]);
    const double leave = nf / (nf - 1) * squared_distance(points.row(i), centroids.row(from));
    for (std::size_t to = 0; to < centroids.rows(); ++to) {
      if (to == from) continue;
      const double nt = static_cast<double>(sizes[to]);
      const double change = nt / (nt + 1) * squared_distance(points.row(i), centroids.row(to)) - leave;
      if (change < best_change) {
        best_change = change;
        best = Move{i, to};
      }
    }
  }
  return best;
}

std::vector<std::size_t> sizes_of(std::span<const std::size_t> assignments, std::size_t k) {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t a : assignments) ++sizes[a];
  return sizes;
}

}  // namespace

KMeansResult lloyd(const Matrix& points, Matrix initial_centroids, std::size_t max_iter) {
  const std::size_t k = initial_centroids.rows();
  KMeansResult r;
  r.assignments = assign_step(points, initial_centroids);
  r.centroids = update_step(points, r.assignments, initial_centroids);
  r.objective_history.push_back(objective(points, r.assignments, r.centroids));
  r.iterations = 1;
  const auto stable = [&](const std::vector<std::size_t>& next) {
    return next == r.assignments &&
           !improving_move(points, r.assignments, r.centroids, sizes_of(r.assignments, k), r.objective_history.back());
  };
  while (r.iterations < max_iter) {
    auto next = assign_step(points, r.centroids);
    if (next == r.assignments) {
      const auto move =
          improving_move(points, r.assignments, r.centroids, sizes_of(r.assignments, k), r.objective_history.back());
      if (!move) {
        r.converged = true;
        break;
      }
      next[move->point] = move->to;
    }
    r.assignments = std::move(next);
    r.centroids = update_step(points, r.assignments, r.centroids);
    r.objective_history.push_back(objective(points, r.assignments, r.centroids));
    ++r.iterations;
  }
  // max_iter == 1 still gets one convergence check
  if (!r.converged && r.iterations >= max_iter) r.converged = stable(assign_step(points, r.centroids));
  r.objective = r.objective_history.back();
  r.cluster_sizes = sizes_of(r.assignments, k);
  return r;
}

KMeansResult kmeans(const Matrix& points, const KMeansOptions& options) {
  if (options.k < 1) throw Error(ErrorCode::InvalidArgument, "kmeans: k must be >= 1");
  if (options.max_iter < 1) throw Error(ErrorCode::InvalidArgument, "kmeans: max_iter must be >= 1");
  if (options.restarts < 1) throw Error(ErrorCode::InvalidArgument, "kmeans: restarts must be >= 1");
  const std::size_t n = points.rows();
  if (n < options.k)
    throw Error(ErrorCode::TooFewPoints,
                std::to_string(n) + " points for k = " + std::to_string(options.k));
  if (!points.all_finite()) throw Error(ErrorCode::NonFiniteValue, "kmeans: non-finite feature");

  std::vector<KMeansResult> runs(options.restarts);
  const auto restarts = static_cast<std::ptrdiff_t>(options.restarts);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(r)));
    // partial Fisher-Yates: k distinct point indices
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Matrix init(options.k, points.cols());
    for (std::size_t c = 0; c < options.k; ++c) {
      const std::size_t j = c + static_cast<std::size_t>(rng.below(n - c));
      std::swap(idx[c], idx[j]);
      std::copy(points.row(idx[c]).begin(), points.row(idx[c]).end(), init.row(c).begin());
    }
    runs[r] = lloyd(points, std::move(init), options.max_iter);
    runs[r].restart_index = static_cast<std::size_t>(r);
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].objective < runs[best].objective) best = r;
  KMeansResult out = std::move(runs[best]);

  if (options.k > 1) {
    bool identical = true;
    for (std::size_t i = 1; i < n && identical; ++i)
      identical = std::equal(points.row(i).begin(), points.row(i).end(), points.row(0).begin());
    out.degenerate = identical;
  }
  return out;
}

Standardizer Standardizer::fit(const Matrix& points) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  Standardizer s{Vector(d, 0.0), Vector(d, 1.0)};
  if (n == 0) return s;
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += points(i, c);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (points(i, c) - mean) * (points(i, c) - mean);
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    s.means[c] = mean;
    s.scales[c] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& points) const {
  if (points.cols() != means.size()) throw Error(ErrorCode::DimensionMismatch, "Standardizer::apply");
  Matrix out = points;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t c = 0; c < out.cols(); ++c) out(i, c) = (out(i, c) - means[c]) / scales[c];
  return out;
}

Vector Standardizer::apply(std::span<const double> point) const {
  if (point.size() != means.size()) throw Error(ErrorCode::DimensionMismatch, "Standardizer::apply");
  Vector out(point.size());
  for (std::size_t c = 0; c < point.size(); ++c) out[c] = (point[c] - means[c]) / scales[c];
  return out;
}

}  // namespace sulfex::cluster
