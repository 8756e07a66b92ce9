#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "sulfex/curveproc.hpp"
#include "sulfex/mixture.hpp"
#include "sulfex/regression.hpp"
#include "sulfex/svm.hpp"

namespace sulfex {

struct Provenance {
  enum class Kind { PaperDefault, Fitted };
  Kind kind = Kind::PaperDefault;
  std::string dataset_hash;  ///< empty for the shipped defaults
  std::optional<std::uint64_t> seed;
  std::string note;

  bool operator==(const Provenance&) const = default;
};

std::string_view to_string(Provenance::Kind k);

/// Everything needed to classify a mixture and predict its expansion: one
/// regression model per group plus the two classification lines.
///   first boundary:  positive side = HN, axes (C3A, WC) by default
///   second boundary: positive side = ML, negative = LL, axes (C3S, WC)
struct ModelBundle {
  std::array<std::optional<GroupModel>, 3> models;  ///< indexed by GroupLabel
  std::optional<LinearBoundary> boundary_first;
  std::optional<LinearBoundary> boundary_first_simplified;
  std::optional<LinearBoundary> boundary_second;
  double failure_threshold = curve::kDefaultThreshold;
  Provenance provenance;
  /// Time span of the data the models were fitted on (years).
  std::optional<std::array<double, 2>> training_time_range;

  /// Throws EmptyGroup when the bundle has no model for `g`.
  const GroupModel& model(GroupLabel g) const;
  bool has_model(GroupLabel g) const { return models[index_of(g)].has_value(); }
  /// Missing a group model or a boundary.
  bool partial() const;

  bool operator==(const ModelBundle&) const = default;
};

/// The shipped models and boundaries:
///   LL  EXP = 0.0157 WC·T + 0.0305
///   ML  EXP = 0.0293 WC·T + 0.000975 C3A·T + 0.0216
///   HN  ln(EXP) = 11.20 CC·T − 5.68 T − 3.66
///   first   C3A + 1.241 WC − 8.697 = 0   (simplified: C3A = 8.00)
///   second  C3S + 387.3 WC − 233.6 = 0
/// Fit statistics are the published ones.
ModelBundle paper_default_bundle();

struct Classification {
  GroupLabel group = GroupLabel::LL;
  double first_value = 0.0;                 ///< decision value of the boundary actually used
  std::optional<double> second_value;       ///< absent when the mixture lacks the second axes
};

/// Value of a boundary at a mixture, reading the features named on its axes.
double boundary_value(const LinearBoundary& boundary, const Mixture& mix);

/// HN when the first boundary puts the mixture on its positive side (strictly
/// above the threshold when the simplified line is used); otherwise ML when
/// the second boundary value is ≥ 0, else LL.
/// Throws MissingField and InvalidArgument (bundle without boundaries).
Classification classify_detail(const Mixture& mix, const ModelBundle& bundle, bool use_simplified_first = true);
inline GroupLabel classify_mixture(const Mixture& mix, const ModelBundle& bundle, bool use_simplified_first = true) {
  return classify_detail(mix, bundle, use_simplified_first).group;
}

/// Expansion (percent) predicted by the group's model at time t (years).
/// Throws NegativeTime, MissingField, EmptyGroup.
double predict_expansion(const Mixture& mix, GroupLabel group, const ModelBundle& bundle, double t);

struct PredictedCurve {
  GroupLabel group = GroupLabel::LL;
  ExpansionSeries series;
};

/// Classifies the mixture, then samples its model on 0, step, 2·step, … ≤ horizon.
PredictedCurve predict_curve(const Mixture& mix, const ModelBundle& bundle, double horizon, double step,
                             bool use_simplified_first = true);

/// Time at which the group model reaches the bundle's failure threshold.
/// Throws NonIncreasing (rate ≤ 0) and AlreadyFailed (threshold reached at t = 0).
double predicted_failure_time(const Mixture& mix, GroupLabel group, const ModelBundle& bundle);
double predicted_failure_time(const Mixture& mix, const ModelBundle& bundle, bool use_simplified_first = true);

}  // namespace sulfex
