#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sulfex/curveproc.hpp"
#include "sulfex/mixture.hpp"
#include "sulfex/numkernel.hpp"

namespace sulfex {

/// Ordinary least squares estimate plus the usual fit statistics.
/// Coefficients follow the column order of the regressor matrix; the group
/// models always put the intercept last.
struct OLSFit {
  Vector coefficients;
  double r_squared = 0.0;
  double residual_std = 0.0;  ///< √(RSS / (n − p))
  Vector t_statistics;        ///< βⱼ / se(βⱼ); ±inf for exact fits
  std::size_t n_observations = 0;

  bool operator==(const OLSFit&) const = default;
};

namespace ols {

/// β̂ = (XᵀX)⁻¹Xᵀy via solve_symmetric on the column-equilibrated normal
/// equations, refined once against the true residual.
///
/// R² = Σ(ŷ − ȳ)² / Σ(y − ȳ)². A constant response with a zero-residual fit
/// gets R² = 1; a constant response that the model cannot reproduce throws
/// ConstantResponse. Throws TooFewRows (rows ≤ cols), RankDeficient,
/// DimensionMismatch and NonFiniteValue.
OLSFit fit(const Matrix& x, std::span<const double> y);

/// ŷ = X β̂. A zero-row matrix gives an empty vector.
Vector predict(const OLSFit& fit, const Matrix& x);

}  // namespace ols

enum class ModelForm { Linear, LogLinear };

std::string_view to_string(ModelForm f);
std::optional<ModelForm> parse_model_form(std::string_view text);

/// One regressor of a group model: a mixture variable times time, time
/// alone, or the constant.
struct Term {
  enum class Kind { VarTime, Time, Constant };
  Kind kind = Kind::Constant;
  MixVar var = MixVar::WC;  ///< meaningful for VarTime only

  static Term var_time(MixVar v) { return {Kind::VarTime, v}; }
  static Term time() { return {Kind::Time, MixVar::WC}; }
  static Term constant() { return {Kind::Constant, MixVar::WC}; }

  /// "WC*T", "T" or "1".
  std::string name() const;
  static std::optional<Term> parse(std::string_view text);

  bool operator==(const Term& o) const {
    return kind == o.kind && (kind != Kind::VarTime || var == o.var);
  }
};

/// Regression model for one expansion-pattern group. Linear models predict
/// expansion directly; log-linear models predict ln(expansion).
struct GroupModel {
  GroupLabel group = GroupLabel::LL;
  ModelForm form = ModelForm::Linear;
  std::vector<Term> terms;
  Vector coefficients;
  std::optional<OLSFit> fit;

  bool operator==(const GroupModel&) const = default;
};

/// The group's fixed functional form:
///   ML: WC·T, C3A·T, 1 (linear)   LL: WC·T, 1 (linear)   HN: CC·T, T, 1 (log-linear)
std::vector<Term> default_terms(GroupLabel g);
inline ModelForm default_form(GroupLabel g) { return g == GroupLabel::HN ? ModelForm::LogLinear : ModelForm::Linear; }

/// Value of one regressor for a mixture at time t; throws MissingField.
double term_value(const Term& term, const Mixture& mix, double t);

/// A group model's response (expansion, or its log) written as
/// intercept + rate·t for one mixture.
struct AffineResponse {
  double intercept = 0.0;
  double rate = 0.0;
};
AffineResponse affine_response(const GroupModel& model, const Mixture& mix);

/// A mixture with its (possibly smoothed) expansion record.
struct MixtureRecord {
  Mixture mixture;
  ExpansionSeries series;
};

/// Pooled design: one row per (mixture, sample). Log-linear forms take
/// ln(expansion) as response and drop samples with expansion ≤ 0.
struct PooledDesign {
  Matrix x;
  Vector y;
  std::size_t dropped_nonpositive = 0;
};
PooledDesign pooled_design(std::span<const MixtureRecord> records, std::span<const Term> terms, ModelForm form);

struct GroupFit {
  GroupModel model;
  std::size_t dropped_nonpositive = 0;
};

/// Pools every sample of every record and fits the given terms by OLS.
/// Throws EmptyGroup for fewer than 2 mixtures; other errors come from
/// ols::fit or term_value.
GroupFit fit_group_model(std::span<const MixtureRecord> records, GroupLabel group, std::span<const Term> terms,
                         ModelForm form);
inline GroupFit fit_group_model(std::span<const MixtureRecord> records, GroupLabel group) {
  const auto terms = default_terms(group);
  return fit_group_model(records, group, terms, default_form(group));
}

}  // namespace sulfex
