#include "sulfex/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace sulfex {
namespace {

template <class F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.with_stage(stage);
  }
}

GroupLabel band_label(double t_fail) {
  if (t_fail < 10.0) return GroupLabel::HN;
  if (t_fail < 40.0) return GroupLabel::ML;
  return GroupLabel::LL;
}

std::string group_name(GroupLabel g) { return std::string(to_string(g)); }

}  // namespace

Grouping group_by_expansion(std::span<const MixtureRecord> dataset, const PipelineConfig& config) {
  if (config.k == 0 || config.k > 3)
    throw Error(ErrorCode::InvalidArgument, "k must be 1, 2 or 3 (got " + std::to_string(config.k) + ")", "clustering");

  Grouping out;
  const std::size_t n = dataset.size();
  std::vector<std::string> flat;
  out.mixtures.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = dataset[i];
    out.mixtures[i].id = rec.mixture.id;
    const ExpansionSeries series = config.smooth_before_clustering
                                       ? staged("smoothing", [&] { return curve::smooth(rec.series, config.alpha); })
                                       : rec.series;
    try {
      out.mixtures[i].failure = curve::failure_point(series, config.threshold);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonPositiveTrend) throw e.with_stage("features");
      flat.push_back(rec.mixture.id);
    }
  }
  if (!flat.empty()) {
    std::string ids;
    for (const auto& id : flat) ids += (ids.empty() ? "" : ", ") + id;
    throw Error(ErrorCode::NonPositiveTrend,
                "no finite failure time (record never reaches the threshold and is not rising) for mixtures: " + ids,
                "features");
  }

  Matrix features(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    features(i, 0) = out.mixtures[i].failure.t_fail;
    features(i, 1) = out.mixtures[i].failure.slope;
  }
  const Matrix scaled =
      config.standardize_features && n >= 2 ? cluster::Standardizer::fit(features).apply(features) : features;

  cluster::KMeansOptions opts;
  opts.k = config.k;
  opts.seed = config.seed;
  opts.max_iter = config.max_iter;
  opts.restarts = config.restarts;
  out.kmeans = staged("clustering", [&] { return cluster::kmeans(scaled, opts); });

  // Mean failure time per cluster, in raw years.
  std::vector<double> mean_t(config.k, 0.0);
  std::vector<std::size_t> size(config.k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    mean_t[out.kmeans.assignments[i]] += features(i, 0);
    ++size[out.kmeans.assignments[i]];
  }
  for (std::size_t c = 0; c < config.k; ++c)
    mean_t[c] = size[c] ? mean_t[c] / static_cast<double>(size[c]) : std::numeric_limits<double>::infinity();

  out.cluster_labels.assign(config.k, GroupLabel::LL);
  if (config.k == 3) {
    std::vector<std::size_t> order(3);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mean_t[a] < mean_t[b]; });
    for (std::size_t r = 0; r < 3; ++r) out.cluster_labels[order[r]] = kAllGroups[r];
  } else {
    for (std::size_t c = 0; c < config.k; ++c) out.cluster_labels[c] = band_label(mean_t[c]);
  }

  for (std::size_t i = 0; i < n; ++i) {
    out.mixtures[i].cluster = out.kmeans.assignments[i];
    out.mixtures[i].group = out.cluster_labels[out.mixtures[i].cluster];
  }
  return out;
}

std::vector<MixtureRecord> regression_records(std::span<const MixtureRecord> records, GroupLabel group,
                                              const PipelineConfig& config) {
  std::vector<MixtureRecord> out(records.begin(), records.end());
  if (group != GroupLabel::HN && config.smooth_linear_groups) {
    for (auto& rec : out) rec.series = staged("smoothing", [&] { return curve::smooth(rec.series, config.alpha); });
  }
  return out;
}

namespace {

void pca_diagnostics(GroupDiagnostics& diag, std::span<const MixtureRecord> members, const PipelineConfig& config) {
  for (MixVar v : kAllMixVars) {
    const bool everywhere =
        std::all_of(members.begin(), members.end(), [&](const MixtureRecord& r) { return r.mixture.get(v).has_value(); });
    if (everywhere) diag.pca_columns.push_back(v);
  }
  const std::size_t n = members.size();
  const std::size_t p = diag.pca_columns.size();
  if (p == 0 || n < 2) {
    diag.pca_note = p == 0 ? "no mixture variable present for every member" : "fewer than 2 mixtures";
    return;
  }
  const std::size_t m = std::min({config.pca_components, n - 1, p});
  if (m == 0) {
    diag.pca_note = "no components requested";
    return;
  }
  Matrix x(n, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) x(i, j) = *members[i].mixture.get(diag.pca_columns[j]);
  diag.pca = staged("pca", [&] { return pca::analyze(x, m, config.standardize_pca); });
  diag.dominant = pca::select_dominant_variables(*diag.pca, m);
}

std::vector<Term> data_driven_terms(const GroupDiagnostics& diag) {
  std::vector<Term> terms;
  for (const auto& d : diag.dominant)
    if (!d.duplicate) terms.push_back(Term::var_time(diag.pca_columns[d.index]));
  if (diag.group == GroupLabel::HN) terms.push_back(Term::time());
  terms.push_back(Term::constant());
  return terms;
}

svm::SvmFit train_boundary(std::span<const MixtureRecord> dataset, const std::vector<std::size_t>& rows,
                           const std::vector<int>& labels, const std::array<MixVar, 2>& axes,
                           const PipelineConfig& config) {
  Matrix points(rows.size(), 2);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t j = 0; j < 2; ++j) points(r, j) = dataset[rows[r]].mixture.require(axes[j]);
  svm::SvmOptions opts;
  opts.box_constraint = config.box_constraint;
  opts.standardize = config.svm_standardize;
  opts.seed = config.seed;
  opts.feature_names = {std::string(symbol(axes[0])), std::string(symbol(axes[1]))};
  auto fit = svm::train(points, labels, opts);
  if (!fit.boundary)
    throw Error(ErrorCode::RankDeficient, "optimal weight vector on " + opts.feature_names[0] + "/" +
                                              opts.feature_names[1] + " is zero; no separating direction");
  return fit;
}

}  // namespace

FitReport fit_pipeline(std::span<const MixtureRecord> dataset, const PipelineConfig& config) {
  staged("input", [&] {
    for (const auto& rec : dataset) {
      validate_mixture(rec.mixture);
      validate_series(rec.series);
    }
    return 0;
  });

  FitReport report;
  Grouping grouping = group_by_expansion(dataset, config);
  report.mixtures = grouping.mixtures;
  report.kmeans = grouping.kmeans;

  std::array<std::vector<std::size_t>, 3> members;
  for (std::size_t i = 0; i < dataset.size(); ++i) members[index_of(report.mixtures[i].group)].push_back(i);

  std::array<bool, 3> clustered{false, false, false};
  for (GroupLabel g : grouping.cluster_labels) clustered[index_of(g)] = true;
  for (GroupLabel g : kAllGroups) {
    const auto count = members[index_of(g)].size();
    if (clustered[index_of(g)] && count < 2)
      throw Error(ErrorCode::EmptyGroup,
                  "group " + group_name(g) + " received " + std::to_string(count) + " mixtures; at least 2 needed",
                  "clustering");
  }

  ModelBundle& bundle = report.bundle;
  double t_lo = std::numeric_limits<double>::infinity();
  double t_hi = -std::numeric_limits<double>::infinity();
  for (const auto& rec : dataset)
    for (const auto& s : rec.series.samples) {
      t_lo = std::min(t_lo, s.t);
      t_hi = std::max(t_hi, s.t);
    }

  for (GroupLabel g : kAllGroups) {
    const auto& rows = members[index_of(g)];
    if (rows.empty()) continue;
    std::vector<MixtureRecord> group_records;
    for (std::size_t i : rows) group_records.push_back(dataset[i]);

    GroupDiagnostics diag;
    diag.group = g;
    diag.mixtures = rows.size();
    pca_diagnostics(diag, group_records, config);

    const auto prepared = regression_records(group_records, g, config);
    const std::vector<Term> terms =
        config.selection == VariableSelection::DataDriven && !diag.dominant.empty() ? data_driven_terms(diag)
                                                                                    : default_terms(g);
    GroupFit fit = staged("regression", [&] { return fit_group_model(prepared, g, terms, default_form(g)); });
    diag.observations = fit.model.fit->n_observations;
    diag.dropped_nonpositive = fit.dropped_nonpositive;
    bundle.models[index_of(g)] = std::move(fit.model);
    report.groups.push_back(std::move(diag));
  }

  if (std::all_of(members.begin(), members.end(), [](const auto& m) { return !m.empty(); })) {
    std::vector<std::size_t> all(dataset.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> first_labels(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) first_labels[i] = report.mixtures[i].group == GroupLabel::HN ? 1 : -1;

    std::vector<std::size_t> rest;
    std::vector<int> second_labels;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (report.mixtures[i].group == GroupLabel::HN) continue;
      rest.push_back(i);
      second_labels.push_back(report.mixtures[i].group == GroupLabel::ML ? 1 : -1);
    }

    staged("svm", [&] {
      report.first_fit = train_boundary(dataset, all, first_labels, config.first_axes, config);
      report.second_fit = train_boundary(dataset, rest, second_labels, config.second_axes, config);

      Matrix first_points(all.size(), 2);
      for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < 2; ++j) first_points(i, j) = dataset[i].mixture.require(config.first_axes[j]);
      bundle.boundary_first = *report.first_fit->boundary;
      bundle.boundary_first_simplified =
          svm::simplify_axis_parallel(*report.first_fit->boundary, first_points, first_labels);
      bundle.boundary_second = *report.second_fit->boundary;
      return 0;
    });
  }

  bundle.failure_threshold = config.threshold;
  bundle.provenance.kind = Provenance::Kind::Fitted;
  bundle.provenance.dataset_hash = dataset_hash(dataset);
  bundle.provenance.seed = config.seed;
  if (t_lo <= t_hi) bundle.training_time_range = std::array<double, 2>{t_lo, t_hi};
  return report;
}

HoldoutReport validate_holdout(const ModelBundle& bundle, std::span<const MixtureRecord> holdout,
                               std::span<const GroupLabel> reference, bool use_simplified_first) {
  if (holdout.size() != reference.size())
    throw Error(ErrorCode::DimensionMismatch, std::to_string(holdout.size()) + " holdout mixtures but " +
                                                  std::to_string(reference.size()) + " reference groups");
  HoldoutReport out;
  for (std::size_t i = 0; i < holdout.size(); ++i) {
    HoldoutEntry e;
    e.id = holdout[i].mixture.id;
    e.boundary_group = classify_mixture(holdout[i].mixture, bundle, use_simplified_first);
    e.reference_group = reference[i];
    e.agree = e.boundary_group == e.reference_group;
    out.agreements += e.agree ? 1 : 0;
    ++out.confusion[index_of(e.reference_group)][index_of(e.boundary_group)];
    out.entries.push_back(std::move(e));
  }
  out.agreement_fraction =
      holdout.empty() ? 0.0 : static_cast<double>(out.agreements) / static_cast<double>(holdout.size());
  return out;
}

std::vector<R2Delta> refit_r2_report(const ModelBundle& bundle, std::span<const MixtureRecord> dataset,
                                     const PipelineConfig& config, bool use_simplified_first) {
  std::array<std::vector<MixtureRecord>, 3> members;
  for (const auto& rec : dataset) members[index_of(classify_mixture(rec.mixture, bundle, use_simplified_first))].push_back(rec);

  std::vector<R2Delta> out;
  for (GroupLabel g : kAllGroups) {
    const GroupModel& stored = bundle.model(g);
    const auto& group_records = members[index_of(g)];
    if (group_records.size() < 2)
      throw Error(ErrorCode::EmptyGroup, "group " + group_name(g) + " has " + std::to_string(group_records.size()) +
                                             " mixtures after boundary reassignment");
    const auto prepared = regression_records(group_records, g, config);
    const GroupFit refit =
        staged("regression", [&] { return fit_group_model(prepared, g, stored.terms, stored.form); });
    R2Delta d;
    d.group = g;
    d.mixtures = group_records.size();
    d.r2_clustered = stored.fit ? stored.fit->r_squared : std::numeric_limits<double>::quiet_NaN();
    d.r2_reassigned = refit.model.fit->r_squared;
    d.delta = d.r2_reassigned - d.r2_clustered;
    out.push_back(d);
  }
  return out;
}

std::string dataset_hash(std::span<const MixtureRecord> dataset) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto eat = [&](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  auto eat_double = [&](double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    eat(&bits, sizeof bits);
  };
  for (const auto& rec : dataset) {
    eat(rec.mixture.id.data(), rec.mixture.id.size());
    const char sep = '\0';
    eat(&sep, 1);
    for (MixVar v : kAllMixVars) {
      const auto value = rec.mixture.get(v);
      const unsigned char present = value ? 1 : 0;
      eat(&present, 1);
      if (value) eat_double(*value);
    }
    const auto count = static_cast<std::uint64_t>(rec.series.size());
    eat(&count, sizeof count);
    for (const auto& s : rec.series.samples) {
      eat_double(s.t);
      eat_double(s.exp);
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sulfex
