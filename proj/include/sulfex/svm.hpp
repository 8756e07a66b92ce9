#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sulfex/numkernel.hpp"

namespace sulfex {

/// A line β·x + b = 0 in a named 2-D feature plane. The raw coefficients are
/// kept as trained (or as published); a unit-norm copy is derived from them.
class LinearBoundary {
 public:
  LinearBoundary() = default;
  /// Throws InvalidArgument when both weights are zero or anything is non-finite.
  LinearBoundary(std::array<std::string, 2> feature_names, std::array<double, 2> weights, double bias,
                 double box_constraint);

  const std::array<std::string, 2>& feature_names() const noexcept { return names_; }
  const std::array<double, 2>& weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }
  double box_constraint() const noexcept { return box_constraint_; }

  /// Same line scaled to ‖β‖₂ = 1 (positive scaling, so signs are preserved).
  const std::array<double, 2>& unit_weights() const noexcept { return unit_weights_; }
  double unit_bias() const noexcept { return unit_bias_; }

  double decision_value(std::span<const double> point) const;

  /// (axis, threshold) when one weight is exactly zero.
  std::optional<std::pair<std::size_t, double>> axis_threshold() const;

  /// "C3A + 1.241*WC - 8.697 = 0" style rendering.
  std::string equation() const;

  bool operator==(const LinearBoundary&) const = default;

 private:
  std::array<std::string, 2> names_;
  std::array<double, 2> weights_{1.0, 0.0};
  double bias_ = 0.0;
  double box_constraint_ = 0.0;
  std::array<double, 2> unit_weights_{1.0, 0.0};
  double unit_bias_ = 0.0;
};

namespace svm {

inline constexpr double kDefaultBoxConstraint = 100.0;

/// +1 when β·x + b ≥ 0 (exact zero goes to +1), else −1.
int classify(const LinearBoundary& boundary, std::span<const double> point);

/// ½‖β‖² + C Σ max(0, 1 − yᵢ(xᵢ·β + b)) for a d-dimensional problem.
double primal_objective(const Matrix& points, std::span<const int> labels, std::span<const double> weights,
                        double bias, double c);

struct SvmOptions {
  double box_constraint = kDefaultBoxConstraint;
  /// Train on z-scored features and map the line back to raw units.
  bool standardize = false;
  std::uint64_t seed = 0;  ///< the solver is deterministic; kept for provenance
  std::array<std::string, 2> feature_names{"x0", "x1"};
};

struct SvmFit {
  /// Absent when the optimal weight vector is exactly zero (for instance
  /// classes that overlap symmetrically); `weights` and `bias` still hold it.
  std::optional<LinearBoundary> boundary;
  std::array<double, 2> weights{};  ///< raw units
  double bias = 0.0;
  Vector slacks;           ///< ξᵢ = max(0, 1 − yᵢ f(xᵢ)) at the returned solution
  double objective = 0.0;  ///< primal objective in the space the problem was solved in
  std::size_t newton_iterations = 0;
  /// KKT conditions verified at the returned point (exact optimum up to rounding).
  bool certified = false;
};

/// Soft-margin linear SVM solved in the primal. The hinge is replaced by a
/// softplus of temperature τ and minimised with damped Newton steps while τ
/// shrinks geometrically; the margin/violator sets read off the smoothed
/// solution then define an equality-constrained QP whose solution is the
/// exact optimum whenever its multipliers land in [0, C].
///
/// Throws SingleClass, InvalidArgument (C ≤ 0, labels not ±1, not 2-D),
/// DimensionMismatch, NonFiniteValue and NoConvergence (non-finite iterate).
SvmFit train(const Matrix& points, std::span<const int> labels, const SvmOptions& options = {});

/// Replaces the boundary with a threshold on its dominant axis (largest
/// |weight| × feature range over `points`). Candidate thresholds are midpoints
/// between neighbouring points of opposite label; the one with the fewest
/// training errors wins, ties going to the candidate nearest the original
/// line (evaluated at the mean of the other feature). Axis-parallel input is
/// returned unchanged.
LinearBoundary simplify_axis_parallel(const LinearBoundary& boundary, const Matrix& points,
                                      std::span<const int> labels);

}  // namespace svm
}  // namespace sulfex
