#pragma once

#include <string>
#include <vector>

#include "sulfex/numkernel.hpp"

namespace sulfex {

struct Sample {
  double t = 0.0;    ///< years
  double exp = 0.0;  ///< expansion, percent (0-100 scale)

  bool operator==(const Sample&) const = default;
};

/// One specimen's expansion history, ordered by strictly increasing time.
struct ExpansionSeries {
  std::string mixture_id;
  std::vector<Sample> samples;

  std::size_t size() const noexcept { return samples.size(); }
  /// Negative expansions are legal (measurement noise) but worth reporting.
  bool has_negative() const;

  bool operator==(const ExpansionSeries&) const = default;
};

/// Throws InvalidArgument unless times strictly increase, NonFiniteValue on NaN/Inf.
void validate_series(const ExpansionSeries& series);

struct FailurePoint {
  double t_fail = 0.0;  ///< years
  double slope = 0.0;   ///< percent per year
  bool censored = false;
};

namespace curve {

inline constexpr double kDefaultAlpha = 0.3;
inline constexpr double kDefaultThreshold = 0.5;
/// Extrapolated failure times of censored records are capped here.
inline constexpr double kMaxExtrapolatedYears = 200.0;

/// The three weights applied to (S[n-1], S[n], S[n+1]) for an interior point.
/// The previous sample is weighted by the *following* interval and vice versa,
/// which makes the weights reproduce any affine function exactly.
struct SmoothingWeights {
  double previous, current, next;
};
SmoothingWeights smoothing_weights(double interval_before, double interval_after, double alpha);

/// Convolution smoothing of interior points; endpoints and timestamps pass through.
/// Throws TooFewSamples (< 3 samples) and InvalidAlpha (outside [0, 1]).
ExpansionSeries smooth(const ExpansionSeries& series, double alpha = kDefaultAlpha);

/// First crossing of `threshold`, linearly interpolated between the bracketing
/// samples, with the secant slope of that interval. A record that never
/// reaches the threshold is extrapolated along the secant through its last two
/// samples (censored = true, t_fail capped at kMaxExtrapolatedYears); a
/// non-positive terminal secant throws NonPositiveTrend.
FailurePoint failure_point(const ExpansionSeries& series, double threshold = kDefaultThreshold);

/// (t_fail, slope) clustering features.
Vector cluster_features(const ExpansionSeries& series, double threshold = kDefaultThreshold);

}  // namespace curve
}  // namespace sulfex
