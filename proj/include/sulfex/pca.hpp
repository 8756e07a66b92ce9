#pragma once

#include <cstdint>
#include <vector>

#include "sulfex/numkernel.hpp"

namespace sulfex::pca {

inline constexpr std::size_t kDefaultComponents = 3;

struct CenteredData {
  Matrix data;
  Vector means;
  Vector scales;  ///< 1.0 for every column when standardisation is off
};

/// Removes column means; with `standardize`, also divides by the sample
/// standard deviation (constant columns keep scale 1 and stay at zero).
/// Throws TooFewRows for fewer than two rows.
CenteredData center_and_scale(const Matrix& x, bool standardize);

struct PCAResult {
  std::vector<Vector> loadings;     ///< unit vectors, one per component
  Vector explained_variance;        ///< ‖X̂ₖ wₖ‖² / (n − 1)
  Vector explained_ratio;           ///< share of the total variance
  Vector means;
  Vector scales;
  double total_variance = 0.0;
};

struct PCAOptions {
  double tol = 1e-10;  ///< eigen residual tolerance, relative to max|XᵀX| (floored at 1)
  std::size_t max_iter = 10000;
  std::uint64_t seed = 7;
};

/// Components by sequential variance maximisation: the k-th loading is the
/// dominant eigenvector of X̂ₖᵀX̂ₖ, after which X̂ₖ₊₁ = X̂ₖ − (X̂ₖ wₖ) wₖᵀ.
/// `x` must already be centred; requires 1 ≤ m ≤ min(rows − 1, cols).
/// means/scales of the result are left empty; see analyze().
PCAResult principal_components(const Matrix& x, std::size_t m, const PCAOptions& options = {});

/// center_and_scale followed by principal_components, carrying means/scales through.
PCAResult analyze(const Matrix& x, std::size_t m, bool standardize = true, const PCAOptions& options = {});

/// X with the given components removed: X − Σ (X̂ₖ wₖ) wₖᵀ applied sequentially.
Matrix deflate(const Matrix& x, const std::vector<Vector>& loadings);

struct DominantVariable {
  std::size_t component = 0;
  std::size_t index = 0;
  bool duplicate = false;  ///< already chosen by an earlier component
  bool tie = false;        ///< another entry had the same magnitude
};

/// For each of the first m components, the column whose loading has the
/// largest absolute value (smallest index on ties).
std::vector<DominantVariable> select_dominant_variables(const PCAResult& result, std::size_t m);

}  // namespace sulfex::pca
