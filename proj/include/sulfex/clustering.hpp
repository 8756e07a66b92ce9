#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sulfex/numkernel.hpp"

namespace sulfex::cluster {

inline constexpr std::uint64_t kDefaultSeed = 20210419;

/// Nearest-centroid assignment (squared Euclidean). Exact ties go to the
/// smallest centroid index. Points and centroids are stored one per row.
/// The OpenMP version is bit-identical to the serial reference.
std::vector<std::size_t> assign_step(const Matrix& points, const Matrix& centroids);
std::vector<std::size_t> assign_step_serial(const Matrix& points, const Matrix& centroids);

/// Moves each centroid to the mean of its assigned points; centroids with no
/// points stay where they are.
Matrix update_step(const Matrix& points, std::span<const std::size_t> assignments, const Matrix& centroids);

/// Sum of squared distances from each point to its assigned centroid.
double objective(const Matrix& points, std::span<const std::size_t> assignments, const Matrix& centroids);

struct KMeansOptions {
  std::size_t k = 3;
  std::uint64_t seed = kDefaultSeed;
  std::size_t max_iter = 300;
  std::size_t restarts = 16;
};

struct KMeansResult {
  Matrix centroids;
  std::vector<std::size_t> assignments;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// Objective after every update step of the winning restart.
  std::vector<double> objective_history;
  std::vector<std::size_t> cluster_sizes;
  /// All points identical while k > 1: clusters beyond the first stay empty.
  bool degenerate = false;
  std::size_t restart_index = 0;
};

/// Lloyd's algorithm from `restarts` seeded initialisations (k distinct data
/// points each); keeps the lowest objective, earliest restart on ties.
/// Once assignments settle, single-point transfers that lower the objective
/// are applied one at a time until none remain.
/// Restarts run concurrently with per-restart seeds derived from
/// (seed, restart index), so the result does not depend on thread count.
///
/// Throws InvalidArgument (k, max_iter or restarts zero), TooFewPoints
/// (fewer points than k) and NonFiniteValue.
KMeansResult kmeans(const Matrix& points, const KMeansOptions& options = {});

/// One restart from explicit initial centroids; exposed for testing.
/// Each transfer step counts as an iteration against max_iter.
KMeansResult lloyd(const Matrix& points, Matrix initial_centroids, std::size_t max_iter);

/// Per-column z-scoring (sample standard deviation; constant columns keep scale 1).
struct Standardizer {
  Vector means;
  Vector scales;

  static Standardizer fit(const Matrix& points);
  Matrix apply(const Matrix& points) const;
  Vector apply(std::span<const double> point) const;
};

}  // namespace sulfex::cluster
