#include "sulfex/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sulfex/domain.hpp"
#include "sulfex/io.hpp"
#include "sulfex/pipeline.hpp"
#include "sulfex/synthetic.hpp"

namespace sulfex {
namespace {

using json = nlohmann::json;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(io::format_double(v)); }

// Left-aligned text table with two-space gutters.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& out) const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_)
      for (std::size_t j = 0; j < r.size(); ++j) {
        if (width.size() <= j) width.push_back(0);
        width[j] = std::max(width[j], r[j].size());
      }
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t j = 0; j < r.size(); ++j) {
        line += r[j];
        if (j + 1 < r.size()) line += std::string(width[j] - r[j].size() + 2, ' ');
      }
      out << line << '\n';
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("SULFEX_SEED");
  if (!env || !*env) return cluster::kDefaultSeed;
  std::uint64_t v = 0;
  const char* end = env + std::strlen(env);
  const auto [p, ec] = std::from_chars(env, end, v);
  if (ec != std::errc{} || p != end)
    throw Error(ErrorCode::InvalidArgument, std::string("SULFEX_SEED='") + env + "' is not a non-negative integer");
  return v;
}

ModelBundle bundle_or_default(const std::string& path, std::ostream& err) {
  if (path.empty()) return paper_default_bundle();
  std::vector<std::string> warnings;
  ModelBundle b = io::load_bundle(path, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return b;
}

std::string opt_value(const std::optional<double>& v, const char* f) { return v ? fmt(f, *v) : "-"; }

// ---- subcommands ----

struct ClassifyArgs {
  std::string mixtures, bundle;
  bool full_first = false;
};

int cmd_classify(const ClassifyArgs& a, bool as_json, std::ostream& out, std::ostream& err) {
  const auto mixtures = io::load_mixtures(a.mixtures);
  const ModelBundle bundle = bundle_or_default(a.bundle, err);
  const bool simplified = !a.full_first;
  TextTable table({"id", "group", "first_boundary", "second_boundary"});
  json rows = json::array();
  for (const auto& m : mixtures) {
    const Classification c = classify_detail(m, bundle, simplified);
    table.add({m.id, std::string(to_string(c.group)), fmt("%.6g", c.first_value), opt_value(c.second_value, "%.6g")});
    rows.push_back({{"id", m.id},
                    {"group", to_string(c.group)},
                    {"first_boundary", jnum(c.first_value)},
                    {"second_boundary", c.second_value ? jnum(*c.second_value) : json(nullptr)}});
  }
  if (as_json) out << json{{"first_boundary", simplified ? "simplified" : "full"}, {"mixtures", rows}}.dump(2) << '\n';
  else table.print(out);
  return kExitOk;
}

struct PredictArgs {
  std::string mixtures, bundle, out;
  double horizon = 40.0;
  double step = 1.0;
  std::optional<double> threshold;
  bool full_first = false;
};

int cmd_predict(const PredictArgs& a, bool as_json, std::ostream& out, std::ostream& err) {
  const auto mixtures = io::load_mixtures(a.mixtures);
  ModelBundle bundle = bundle_or_default(a.bundle, err);
  if (a.threshold) bundle.failure_threshold = *a.threshold;
  const bool simplified = !a.full_first;

  TextTable table({"id", "group", "t_end", "expansion_end", "failure_time_years"});
  json rows = json::array();
  std::vector<io::LabeledSeries> curves;
  for (const auto& m : mixtures) {
    const PredictedCurve c = predict_curve(m, bundle, a.horizon, a.step, simplified);
    const Sample last = c.series.samples.back();
    std::string fail_text;
    json fail_json;
    try {
      const double t = predicted_failure_time(m, c.group, bundle);
      fail_text = fmt("%.3f", t);
      fail_json = jnum(t);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonIncreasing && e.code() != ErrorCode::AlreadyFailed) throw;
      fail_text = std::string(to_string(e.code()));
      fail_json = fail_text;
    }
    table.add({m.id, std::string(to_string(c.group)), fmt("%g", last.t), fmt("%.6g", last.exp), fail_text});
    rows.push_back({{"id", m.id},
                    {"group", to_string(c.group)},
                    {"t_end", jnum(last.t)},
                    {"expansion_end", jnum(last.exp)},
                    {"failure_time_years", fail_json}});
    curves.push_back({m.id + "/" + std::string(to_string(c.group)), c.series.samples});
  }
  if (!a.out.empty()) io::emit_plot_data(curves, a.out);
  if (as_json) out << json{{"threshold", jnum(bundle.failure_threshold)}, {"mixtures", rows}}.dump(2) << '\n';
  else table.print(out);
  return kExitOk;
}

struct FitArgs {
  std::string manifest, out;
  PipelineConfig config;
  bool no_smooth_clustering = false;
  bool no_smooth_regression = false;
  bool raw_features = false;
  bool data_driven = false;
};

void print_fit_report(const FitReport& r, std::ostream& out) {
  const ModelBundle& b = r.bundle;
  out << "provenance: fitted, dataset " << b.provenance.dataset_hash << ", seed " << *b.provenance.seed << "\n";
  out << "clusters: k = " << r.kmeans.cluster_sizes.size() << ", sizes";
  for (auto s : r.kmeans.cluster_sizes) out << ' ' << s;
  out << ", objective " << fmt("%.6g", r.kmeans.objective) << "\n\n";
  for (const auto& g : r.groups) {
    const GroupModel& m = b.model(g.group);
    out << "Group " << to_string(g.group) << " (" << to_string(m.form) << ", " << g.mixtures << " mixtures, "
        << g.observations << " observations";
    if (g.dropped_nonpositive) out << ", " << g.dropped_nonpositive << " non-positive samples dropped";
    out << ")\n";
    TextTable t({"Variable", "Coefficient", "T-statistic"});
    for (std::size_t j = 0; j < m.terms.size(); ++j)
      t.add({m.terms[j].name(), fmt("%.6g", m.coefficients[j]), fmt("%.3f", m.fit->t_statistics[j])});
    t.print(out);
    out << "R2 = " << fmt("%.4f", m.fit->r_squared) << ", residual std = " << fmt("%.4g", m.fit->residual_std) << '\n';
    if (g.pca) {
      out << "PCA dominant variables:";
      for (const auto& d : g.dominant) out << ' ' << symbol(g.pca_columns[d.index]) << (d.duplicate ? "(dup)" : "");
      out << "; explained ratio";
      for (double v : g.pca->explained_ratio) out << ' ' << fmt("%.3f", v);
      out << '\n';
    } else if (!g.pca_note.empty()) {
      out << "PCA skipped: " << g.pca_note << '\n';
    }
    out << '\n';
  }
  if (b.boundary_first) {
    out << "first boundary:  " << b.boundary_first->equation() << '\n';
    out << "  simplified:    " << b.boundary_first_simplified->equation() << '\n';
    out << "second boundary: " << b.boundary_second->equation() << '\n';
  } else {
    out << "boundaries: not trained (bundle is partial)\n";
  }
}

json fit_report_json(const FitReport& r) {
  const ModelBundle& b = r.bundle;
  json groups = json::array();
  for (const auto& g : r.groups) {
    const GroupModel& m = b.model(g.group);
    json terms = json::array();
    for (std::size_t j = 0; j < m.terms.size(); ++j)
      terms.push_back({{"variable", m.terms[j].name()},
                       {"coefficient", jnum(m.coefficients[j])},
                       {"t_statistic", jnum(m.fit->t_statistics[j])}});
    json dom = json::array();
    for (const auto& d : g.dominant) dom.push_back(symbol(g.pca_columns[d.index]));
    groups.push_back({{"group", to_string(g.group)},
                      {"form", to_string(m.form)},
                      {"mixtures", g.mixtures},
                      {"observations", g.observations},
                      {"dropped_nonpositive", g.dropped_nonpositive},
                      {"terms", terms},
                      {"r_squared", jnum(m.fit->r_squared)},
                      {"residual_std", jnum(m.fit->residual_std)},
                      {"pca_dominant", dom}});
  }
  json mixtures = json::array();
  for (const auto& m : r.mixtures)
    mixtures.push_back({{"id", m.id}, {"group", to_string(m.group)}, {"cluster", m.cluster}});
  json doc = {{"dataset_hash", b.provenance.dataset_hash},
              {"seed", *b.provenance.seed},
              {"cluster_sizes", r.kmeans.cluster_sizes},
              {"groups", groups},
              {"mixtures", mixtures},
              {"partial", b.partial()}};
  if (b.boundary_first) {
    doc["boundaries"] = {{"first", b.boundary_first->equation()},
                         {"first_simplified", b.boundary_first_simplified->equation()},
                         {"second", b.boundary_second->equation()}};
  }
  return doc;
}

int cmd_fit(FitArgs a, bool as_json, std::ostream& out) {
  const auto dataset = [&] {
    try {
      return io::load_dataset(std::filesystem::path(a.manifest));
    } catch (const Error& e) {
      throw e.with_stage("input");
    }
  }();
  a.config.smooth_before_clustering = !a.no_smooth_clustering;
  a.config.smooth_linear_groups = !a.no_smooth_regression;
  a.config.standardize_features = !a.raw_features;
  a.config.selection = a.data_driven ? VariableSelection::DataDriven : VariableSelection::FixedForms;
  const FitReport report = fit_pipeline(dataset, a.config);
  if (!a.out.empty()) io::save_bundle(report.bundle, a.out);
  if (as_json) out << fit_report_json(report).dump(2) << '\n';
  else print_fit_report(report, out);
  return kExitOk;
}

struct SeriesArgs {
  std::string series, out;
  std::string unit = "percent";
  PipelineConfig config;
  bool no_smooth = false;
  bool raw_features = false;
};

io::ExpansionUnit parse_unit(const std::string& u) {
  return u == "fraction" ? io::ExpansionUnit::Fraction : io::ExpansionUnit::Percent;
}

int cmd_smooth(const SeriesArgs& a, bool as_json, std::ostream& out) {
  const auto series = io::load_series(a.series, parse_unit(a.unit));
  std::vector<io::LabeledSeries> labeled;
  for (const auto& s : series) {
    labeled.push_back({s.mixture_id + "/original", s.samples});
    labeled.push_back({s.mixture_id + "/smoothed", curve::smooth(s, a.config.alpha).samples});
  }
  if (!a.out.empty()) {
    io::emit_plot_data(labeled, a.out);
    return kExitOk;
  }
  if (as_json) {
    json doc = json::array();
    for (const auto& l : labeled) {
      json t = json::array(), v = json::array();
      for (const auto& p : l.samples) {
        t.push_back(jnum(p.t));
        v.push_back(jnum(p.exp));
      }
      doc.push_back({{"label", l.label}, {"t", t}, {"value", v}});
    }
    out << doc.dump(2) << '\n';
  } else {
    io::write_plot_data(out, labeled);
  }
  return kExitOk;
}

int cmd_cluster(SeriesArgs a, bool as_json, std::ostream& out) {
  const auto series = io::load_series(a.series, parse_unit(a.unit));
  std::vector<MixtureRecord> records;
  for (const auto& s : series) {
    MixtureRecord r;
    r.mixture.id = s.mixture_id;
    r.series = s;
    records.push_back(std::move(r));
  }
  a.config.smooth_before_clustering = !a.no_smooth;
  a.config.standardize_features = !a.raw_features;
  const Grouping g = group_by_expansion(records, a.config);
  TextTable table({"id", "t_fail", "slope", "censored", "cluster", "group"});
  json rows = json::array();
  for (const auto& m : g.mixtures) {
    table.add({m.id, fmt("%.4f", m.failure.t_fail), fmt("%.6g", m.failure.slope), m.failure.censored ? "yes" : "no",
               std::to_string(m.cluster), std::string(to_string(m.group))});
    rows.push_back({{"id", m.id},
                    {"t_fail", jnum(m.failure.t_fail)},
                    {"slope", jnum(m.failure.slope)},
                    {"censored", m.failure.censored},
                    {"cluster", m.cluster},
                    {"group", to_string(m.group)}});
  }
  if (as_json) {
    out << json{{"objective", jnum(g.kmeans.objective)}, {"cluster_sizes", g.kmeans.cluster_sizes}, {"mixtures", rows}}
               .dump(2)
        << '\n';
  } else {
    table.print(out);
  }
  return kExitOk;
}

struct GenerateArgs {
  std::string out;
  std::vector<std::size_t> counts{12, 12, 12};
  SyntheticConfig config;
};

int cmd_generate(GenerateArgs a, bool as_json, std::ostream& out) {
  a.config.counts = {a.counts[0], a.counts[1], a.counts[2]};
  const SyntheticDataset d = generate_synthetic(a.config);
  io::save_dataset(d.records, a.out, &d.truth);
  if (as_json) {
    out << json{{"directory", a.out}, {"mixtures", d.records.size()}, {"seed", a.config.seed}}.dump(2) << '\n';
  } else {
    out << "wrote " << d.records.size() << " mixtures (seed " << a.config.seed << ") to " << a.out << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::uint64_t seed_default = cluster::kDefaultSeed;
  try {
    seed_default = default_seed();
  } catch (const Error& e) {
    err << "sulfex: error: " << e.what() << '\n';
    return kExitInput;
  }

  CLI::App app{"sulfex: sulfate-attack expansion models for concrete mixtures.\n"
               "Groups: HN (high speed, nonlinear), ML (moderate speed, linear), LL (low speed, linear)."};
  app.require_subcommand(1);
  std::string format = "table";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json"}))->capture_default_str();

  auto add_first_flags = [](CLI::App* sub, bool& full_first) {
    auto* s = sub->add_flag("--simplified-first", "Classify HN by the axis-parallel first boundary (default; C3A > 8 "
                                                  "for the shipped bundle)");
    auto* f = sub->add_flag("--full-first", full_first, "Classify HN by the full trained first boundary instead");
    s->excludes(f);
  };

  ClassifyArgs classify;
  auto* c = app.add_subcommand("classify", "Assign each mixture to HN, ML or LL and print both boundary values");
  c->add_option("mixtures", classify.mixtures, "Mixture table (id,wc,c3a,c3s,c2s,c4af,cement_content,air)")
      ->required();
  c->add_option("--bundle", classify.bundle, "Model bundle (default: the shipped published models)");
  add_first_flags(c, classify.full_first);

  PredictArgs predict;
  auto* p = app.add_subcommand("predict", "Predict expansion curves and failure times");
  p->add_option("mixtures", predict.mixtures, "Mixture table")->required();
  p->add_option("--bundle", predict.bundle, "Model bundle (default: the shipped published models)");
  p->add_option("--horizon", predict.horizon, "Last prediction time, years")->check(CLI::PositiveNumber)->capture_default_str();
  p->add_option("--step", predict.step, "Grid step, years")->check(CLI::PositiveNumber)->capture_default_str();
  p->add_option("--threshold", predict.threshold, "Failure threshold, percent expansion (default: the bundle's, 0.5 "
                                                  "for the shipped bundle)")
      ->check(CLI::PositiveNumber);
  p->add_option("-o,--out", predict.out, "Write curves as plot data (series_label,t,value)");
  add_first_flags(p, predict.full_first);

  FitArgs fit;
  fit.config.seed = seed_default;
  auto* f = app.add_subcommand("fit", "Fit a model bundle from a dataset manifest and print the fit report");
  f->add_option("manifest", fit.manifest, "Dataset manifest (JSON)")->required();
  f->add_option("-o,--out", fit.out, "Write the fitted bundle here");
  f->add_option("--alpha", fit.config.alpha, "Smoothing weight on the centre sample")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  f->add_option("--k", fit.config.k, "Number of expansion-pattern clusters")->check(CLI::Range(1, 3))->capture_default_str();
  f->add_option("--box-constraint,-C", fit.config.box_constraint, "SVM box constraint")
      ->check(CLI::PositiveNumber)->capture_default_str();
  f->add_option("--seed", fit.config.seed, "Clustering seed (default overridable with SULFEX_SEED)")->capture_default_str();
  f->add_option("--restarts", fit.config.restarts, "k-means restarts")->check(CLI::PositiveNumber)->capture_default_str();
  f->add_option("--max-iter", fit.config.max_iter, "k-means iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
  f->add_option("--threshold", fit.config.threshold, "Failure threshold, percent expansion")
      ->check(CLI::PositiveNumber)->capture_default_str();
  f->add_flag("--no-smooth-clustering", fit.no_smooth_clustering, "Cluster on raw records");
  f->add_flag("--no-smooth-regression", fit.no_smooth_regression, "Do not smooth ML/LL records before regression");
  f->add_flag("--raw-features", fit.raw_features, "Cluster on unscaled (t_fail, slope)");
  f->add_flag("--data-driven", fit.data_driven, "Pick regression variables from PCA instead of the fixed group forms");
  f->add_flag("--svm-standardize", fit.config.svm_standardize, "Train boundaries on z-scored axes");

  SeriesArgs smooth;
  auto* s = app.add_subcommand("smooth", "Smooth expansion records; emits original and smoothed curves");
  s->add_option("series", smooth.series, "Series table (mixture_id,t_years,expansion_percent)")->required();
  s->add_option("--alpha", smooth.config.alpha, "Smoothing weight on the centre sample (1 leaves records unchanged)")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  s->add_option("--unit", smooth.unit, "Expansion unit of the input")
      ->check(CLI::IsMember({"percent", "fraction"}))->capture_default_str();
  s->add_option("-o,--out", smooth.out, "Write plot data here instead of stdout");

  SeriesArgs clus;
  clus.config.seed = seed_default;
  auto* k = app.add_subcommand("cluster", "Cluster expansion records by failure time and slope");
  k->add_option("series", clus.series, "Series table (mixture_id,t_years,expansion_percent)")->required();
  k->add_option("--k", clus.config.k, "Number of clusters")->check(CLI::Range(1, 3))->capture_default_str();
  k->add_option("--seed", clus.config.seed, "Clustering seed (default overridable with SULFEX_SEED)")->capture_default_str();
  k->add_option("--restarts", clus.config.restarts, "k-means restarts")->check(CLI::PositiveNumber)->capture_default_str();
  k->add_option("--alpha", clus.config.alpha, "Smoothing weight on the centre sample")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  k->add_option("--threshold", clus.config.threshold, "Failure threshold, percent expansion")
      ->check(CLI::PositiveNumber)->capture_default_str();
  k->add_option("--unit", clus.unit, "Expansion unit of the input")
      ->check(CLI::IsMember({"percent", "fraction"}))->capture_default_str();
  k->add_flag("--no-smooth", clus.no_smooth, "Cluster on raw records");
  k->add_flag("--raw-features", clus.raw_features, "Cluster on unscaled (t_fail, slope)");

  GenerateArgs gen;
  gen.config.seed = seed_default;
  auto* g = app.add_subcommand("generate", "Write a synthetic dataset drawn from the shipped group models");
  g->add_option("out", gen.out, "Output directory (mixtures.csv, series.csv, manifest.json, truth.csv)")->required();
  g->add_option("--counts", gen.counts, "Mixtures per group, HN,ML,LL")->expected(3)->delimiter(',')->capture_default_str();
  g->add_option("--noise", gen.config.noise, "Relative Gaussian noise on every sample")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  g->add_option("--seed", gen.config.seed, "Generator seed (default overridable with SULFEX_SEED)")->capture_default_str();
  g->add_option("--planted", gen.config.planted_misclassified, "Specimens with mixtures from another group's region")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  const bool as_json = format == "json";
  try {
    if (*c) return cmd_classify(classify, as_json, out, err);
    if (*p) return cmd_predict(predict, as_json, out, err);
    if (*f) return cmd_fit(fit, as_json, out);
    if (*s) return cmd_smooth(smooth, as_json, out);
    if (*k) return cmd_cluster(clus, as_json, out);
    if (*g) return cmd_generate(gen, as_json, out);
  } catch (const Error& e) {
    err << "sulfex: error: " << e.what() << '\n';
    return is_validation_error(e.code()) ? kExitInput : kExitNumerical;
  } catch (const std::exception& e) {
    err << "sulfex: error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInput;
}

}  // namespace sulfex
