#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sulfex/clustering.hpp"
#include "sulfex/domain.hpp"
#include "sulfex/pca.hpp"
#include "sulfex/regression.hpp"
#include "sulfex/svm.hpp"

namespace sulfex {

enum class VariableSelection {
  FixedForms,  ///< each group's fixed model form (default_terms)
  DataDriven,  ///< PCA-selected variables × T (+ T for HN) + constant
};

struct PipelineConfig {
  double alpha = curve::kDefaultAlpha;
  double threshold = curve::kDefaultThreshold;
  std::size_t k = 3;
  double box_constraint = svm::kDefaultBoxConstraint;
  std::uint64_t seed = cluster::kDefaultSeed;
  std::size_t restarts = 16;
  std::size_t max_iter = 300;
  bool smooth_before_clustering = true;
  /// ML and LL records are smoothed before regression; HN records never are.
  bool smooth_linear_groups = true;
  bool standardize_features = true;
  bool standardize_pca = true;
  std::size_t pca_components = pca::kDefaultComponents;
  VariableSelection selection = VariableSelection::FixedForms;
  std::array<MixVar, 2> first_axes{MixVar::C3A, MixVar::WC};
  std::array<MixVar, 2> second_axes{MixVar::C3S, MixVar::WC};
  bool svm_standardize = false;
};

struct MixtureDiagnostics {
  std::string id;
  FailurePoint failure;
  std::size_t cluster = 0;
  GroupLabel group = GroupLabel::LL;
};

struct GroupDiagnostics {
  GroupLabel group = GroupLabel::LL;
  std::size_t mixtures = 0;
  std::size_t observations = 0;
  std::size_t dropped_nonpositive = 0;
  std::vector<MixVar> pca_columns;  ///< variables present for every mixture in the group
  std::optional<pca::PCAResult> pca;
  std::vector<pca::DominantVariable> dominant;  ///< indices into pca_columns
  std::string pca_note;                         ///< why PCA was skipped, if it was
};

struct FitReport {
  ModelBundle bundle;
  std::vector<MixtureDiagnostics> mixtures;
  std::vector<GroupDiagnostics> groups;
  cluster::KMeansResult kmeans;
  std::optional<svm::SvmFit> first_fit;
  std::optional<svm::SvmFit> second_fit;
};

/// Expansion-based grouping: smooth → (t_fail, slope) → optional z-scoring →
/// k-means → clusters labelled by ascending mean failure time (HN, ML, LL).
/// With k < 3 each cluster takes the label whose failure-time band holds its
/// mean (HN < 10 y ≤ ML < 40 y ≤ LL).
struct Grouping {
  std::vector<MixtureDiagnostics> mixtures;
  cluster::KMeansResult kmeans;
  std::vector<GroupLabel> cluster_labels;
};
Grouping group_by_expansion(std::span<const MixtureRecord> dataset, const PipelineConfig& config);

/// Smooth → cluster → per-group PCA and OLS → boundaries → bundle.
/// Errors carry the stage that raised them ("smoothing", "clustering", ...).
FitReport fit_pipeline(std::span<const MixtureRecord> dataset, const PipelineConfig& config = {});

/// Records prepared for regression of a group (smoothing rules applied).
std::vector<MixtureRecord> regression_records(std::span<const MixtureRecord> records, GroupLabel group,
                                              const PipelineConfig& config);

struct HoldoutEntry {
  std::string id;
  GroupLabel boundary_group = GroupLabel::LL;
  GroupLabel reference_group = GroupLabel::LL;
  bool agree = false;
};

struct HoldoutReport {
  std::vector<HoldoutEntry> entries;
  std::size_t agreements = 0;
  double agreement_fraction = 0.0;
  /// confusion[reference][boundary]
  std::array<std::array<std::size_t, 3>, 3> confusion{};
};

/// Compares boundary-based groups of the holdout mixtures with reference
/// groups (normally group_by_expansion on the holdout records).
HoldoutReport validate_holdout(const ModelBundle& bundle, std::span<const MixtureRecord> holdout,
                               std::span<const GroupLabel> reference, bool use_simplified_first = true);

struct R2Delta {
  GroupLabel group = GroupLabel::LL;
  std::size_t mixtures = 0;
  double r2_clustered = 0.0;   ///< from the bundle's stored fit
  double r2_reassigned = 0.0;  ///< refit on boundary-assigned membership
  double delta = 0.0;          ///< reassigned − clustered
};

/// Reassigns every mixture by the bundle's boundaries, refits each group's
/// model form on the new membership, and reports R² against the stored fits.
/// Throws EmptyGroup naming any group left with fewer than 2 mixtures.
std::vector<R2Delta> refit_r2_report(const ModelBundle& bundle, std::span<const MixtureRecord> dataset,
                                     const PipelineConfig& config = {}, bool use_simplified_first = true);

/// FNV-1a over ids, mixture fields and samples, as 16 hex digits.
std::string dataset_hash(std::span<const MixtureRecord> dataset);

}  // namespace sulfex
