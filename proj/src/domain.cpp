#include "sulfex/domain.hpp"

#include <cmath>

namespace sulfex {

std::string_view to_string(Provenance::Kind k) { return k == Provenance::Kind::PaperDefault ? "paper-default" : "fitted"; }

const GroupModel& ModelBundle::model(GroupLabel g) const {
  const auto& m = models[index_of(g)];
  if (!m) throw Error(ErrorCode::EmptyGroup, "bundle has no model for group " + std::string(to_string(g)));
  return *m;
}

bool ModelBundle::partial() const {
  for (const auto& m : models)
    if (!m) return true;
  return !boundary_first || !boundary_second;
}

namespace {

GroupModel published(GroupLabel g, Vector coefficients, double r2, double residual_std, Vector t_stats,
                     std::size_t n) {
  GroupModel m;
  m.group = g;
  m.form = default_form(g);
  m.terms = default_terms(g);
  m.coefficients = coefficients;
  m.fit = OLSFit{std::move(coefficients), r2, residual_std, std::move(t_stats), n};
  return m;
}

}  // namespace

ModelBundle paper_default_bundle() {
  ModelBundle b;
  b.models[index_of(GroupLabel::LL)] = published(GroupLabel::LL, {0.0157, 0.0305}, 0.7735, 0.0021, {92.086, 25.073}, 2545);
  b.models[index_of(GroupLabel::ML)] =
      published(GroupLabel::ML, {0.0293, 0.000975, 0.0216}, 0.9197, 0.0015, {39.704, 14.427, 12.197}, 870);
  b.models[index_of(GroupLabel::HN)] =
      published(GroupLabel::HN, {11.20, -5.68, -3.66}, 0.7256, 0.3550, {7.345, -6.323, -77.691}, 517);
  b.boundary_first = LinearBoundary({"C3A", "WC"}, {1.0, 1.241}, -8.697, svm::kDefaultBoxConstraint);
  b.boundary_first_simplified = LinearBoundary({"C3A", "WC"}, {1.0, 0.0}, -8.00, svm::kDefaultBoxConstraint);
  b.boundary_second = LinearBoundary({"C3S", "WC"}, {1.0, 387.3}, -233.6, svm::kDefaultBoxConstraint);
  b.failure_threshold = curve::kDefaultThreshold;
  b.provenance.kind = Provenance::Kind::PaperDefault;
  b.training_time_range = std::array<double, 2>{0.0, 40.0};
  return b;
}

double boundary_value(const LinearBoundary& boundary, const Mixture& mix) {
  double point[2];
  for (std::size_t i = 0; i < 2; ++i) {
    const auto var = parse_mix_var(boundary.feature_names()[i]);
    if (!var)
      throw Error(ErrorCode::InvalidArgument, "boundary axis '" + boundary.feature_names()[i] + "' is not a mixture variable");
    point[i] = mix.require(*var);
  }
  return boundary.decision_value(point);
}

Classification classify_detail(const Mixture& mix, const ModelBundle& bundle, bool use_simplified_first) {
  const auto& first = use_simplified_first ? bundle.boundary_first_simplified : bundle.boundary_first;
  if (!first || !bundle.boundary_second)
    throw Error(ErrorCode::InvalidArgument, "bundle has no classification boundaries");
  Classification c;
  c.first_value = boundary_value(*first, mix);
  // The simplified rule reads "C3A exceeds the threshold"; the trained line
  // uses the ≥ 0 convention of svm::classify.
  const bool hn = use_simplified_first ? c.first_value > 0.0 : c.first_value >= 0.0;
  if (hn) {
    try {
      c.second_value = boundary_value(*bundle.boundary_second, mix);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MissingField) throw;
    }
    c.group = GroupLabel::HN;
    return c;
  }
  c.second_value = boundary_value(*bundle.boundary_second, mix);
  c.group = *c.second_value >= 0.0 ? GroupLabel::ML : GroupLabel::LL;
  return c;
}

double predict_expansion(const Mixture& mix, GroupLabel group, const ModelBundle& bundle, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, "prediction time must be >= 0");
  const GroupModel& m = bundle.model(group);
  double response = 0.0;
  for (std::size_t j = 0; j < m.terms.size(); ++j) response += m.coefficients[j] * term_value(m.terms[j], mix, t);
  return m.form == ModelForm::LogLinear ? std::exp(response) : response;
}

PredictedCurve predict_curve(const Mixture& mix, const ModelBundle& bundle, double horizon, double step,
                             bool use_simplified_first) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  if (!(step > 0.0) || !std::isfinite(step)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  PredictedCurve out;
  out.group = classify_mixture(mix, bundle, use_simplified_first);
  out.series.mixture_id = mix.id;
  // grid points i*step <= horizon, tolerant of rounding in horizon/step
  const auto count = static_cast<std::size_t>(std::floor(horizon / step * (1.0 + 1e-12))) + 1;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) * step;
    out.series.samples.push_back({t, predict_expansion(mix, out.group, bundle, t)});
  }
  return out;
}

double predicted_failure_time(const Mixture& mix, GroupLabel group, const ModelBundle& bundle) {
  const GroupModel& m = bundle.model(group);
  const AffineResponse r = affine_response(m, mix);
  const double target =
      m.form == ModelForm::LogLinear ? std::log(bundle.failure_threshold) : bundle.failure_threshold;
  if (r.intercept >= target)
    throw Error(ErrorCode::AlreadyFailed, "mixture '" + mix.id + "' is predicted at or above the threshold at t = 0");
  if (!(r.rate > 0.0))
    throw Error(ErrorCode::NonIncreasing, "mixture '" + mix.id + "' has non-increasing predicted expansion");
  return (target - r.intercept) / r.rate;
}

double predicted_failure_time(const Mixture& mix, const ModelBundle& bundle, bool use_simplified_first) {
  return predicted_failure_time(mix, classify_mixture(mix, bundle, use_simplified_first), bundle);
}

}  // namespace sulfex
