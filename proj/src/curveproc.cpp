#include "sulfex/curveproc.hpp"

#include <algorithm>
#include <cmath>

namespace sulfex {

bool ExpansionSeries::has_negative() const {
  return std::any_of(samples.begin(), samples.end(), [](const Sample& s) { return s.exp < 0.0; });
}

void validate_series(const ExpansionSeries& series) {
  for (std::size_t i = 0; i < series.samples.size(); ++i) {
    const Sample& s = series.samples[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.exp))
      throw Error(ErrorCode::NonFiniteValue,
                  "series '" + series.mixture_id + "' sample " + std::to_string(i) + " is not finite");
    if (i > 0 && !(s.t > series.samples[i - 1].t))
      throw Error(ErrorCode::InvalidArgument,
                  "series '" + series.mixture_id + "' times not strictly increasing at sample " + std::to_string(i));
  }
}

namespace curve {

SmoothingWeights smoothing_weights(double interval_before, double interval_after, double alpha) {
  const double span = interval_before + interval_after;
  return {(1.0 - alpha) * interval_after / span, alpha, (1.0 - alpha) * interval_before / span};
}

ExpansionSeries smooth(const ExpansionSeries& series, double alpha) {
  if (series.size() < 3)
    throw Error(ErrorCode::TooFewSamples, "series '" + series.mixture_id + "' has " +
                                              std::to_string(series.size()) + " samples; smoothing needs 3");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw Error(ErrorCode::InvalidAlpha, "alpha " + std::to_string(alpha) + " outside [0, 1]");
  validate_series(series);

  ExpansionSeries out = series;
  const auto& s = series.samples;
  for (std::size_t n = 1; n + 1 < s.size(); ++n) {
    const auto w = smoothing_weights(s[n].t - s[n - 1].t, s[n + 1].t - s[n].t, alpha);
    // same weighted sum, written as a correction to the centre so constants
    // and alpha = 1 come out exact
    out.samples[n].exp = s[n].exp + (w.previous * (s[n - 1].exp - s[n].exp) + w.next * (s[n + 1].exp - s[n].exp));
  }
  return out;
}

FailurePoint failure_point(const ExpansionSeries& series, double threshold) {
  if (series.samples.empty()) throw Error(ErrorCode::TooFewSamples, "series '" + series.mixture_id + "' is empty");
  if (!std::isfinite(threshold)) throw Error(ErrorCode::NonFiniteValue, "threshold is not finite");
  validate_series(series);
  const auto& s = series.samples;
  if (s.size() < 2)
    throw Error(ErrorCode::TooFewSamples, "series '" + series.mixture_id + "' needs 2 samples for a slope");

  if (s.front().exp >= threshold) {
    // crossed before the record starts
    return {s[0].t, (s[1].exp - s[0].exp) / (s[1].t - s[0].t), false};
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].exp >= threshold) {
      const double dt = s[i].t - s[i - 1].t;
      const double de = s[i].exp - s[i - 1].exp;  // > 0: s[i-1] is below threshold
      return {s[i - 1].t + (threshold - s[i - 1].exp) / de * dt, de / dt, false};
    }
  }

  const Sample& a = s[s.size() - 2];
  const Sample& b = s.back();
  const double slope = (b.exp - a.exp) / (b.t - a.t);
  if (!(slope > 0.0))
    throw Error(ErrorCode::NonPositiveTrend,
                "series '" + series.mixture_id + "' never reaches " + std::to_string(threshold) +
                    " and its terminal slope is not positive");
  const double t_fail = std::min(b.t + (threshold - b.exp) / slope, kMaxExtrapolatedYears);
  return {t_fail, slope, true};
}

Vector cluster_features(const ExpansionSeries& series, double threshold) {
  const FailurePoint fp = failure_point(series, threshold);
  return {fp.t_fail, fp.slope};
}

}  // namespace curve
}  // namespace sulfex
