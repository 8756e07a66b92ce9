#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sulfex/domain.hpp"
#include "sulfex/regression.hpp"

namespace sulfex {

/// Archetype dataset generator. Mixture properties are drawn from
/// group-consistent regions (HN: C3A > 8; ML and LL on opposite sides of the
/// shipped second boundary, with a margin), and each record follows the
/// group's shipped model with multiplicative Gaussian noise:
///   exp = model(t) · (1 + noise · z)
/// ML/LL records span at least `record_years` at `step_years`; HN records are sampled
/// every `hn_step_years` until the model passes `hn_stop_expansion`.
struct SyntheticConfig {
  std::array<std::size_t, 3> counts{12, 12, 12};  ///< indexed by GroupLabel (HN, ML, LL)
  double noise = 0.0;  ///< relative per-sample measurement noise
  /// Relative spread of a per-mixture factor scaling the whole clean curve,
  /// i.e. mixture-to-mixture deviation the group model does not explain.
  double mixture_effect = 0.0;
  std::uint64_t seed = 1;
  /// Specimens whose mixture properties are drawn from another group's
  /// region while their expansion follows their own group.
  std::size_t planted_misclassified = 0;
  double record_years = 40.0;
  double step_years = 1.0;
  double hn_step_years = 0.25;
  double hn_stop_expansion = 5.0;
  /// ML/LL records are extended past record_years until the model exceeds
  /// this value (0 disables the extension).
  double linear_stop_expansion = 0.6;
};

struct SyntheticDataset {
  std::vector<MixtureRecord> records;
  std::vector<GroupLabel> truth;  ///< group whose model generated each record
  std::vector<bool> planted;      ///< mixture drawn from a different group's region
};

/// Throws InvalidArgument for negative noise or non-positive steps.
SyntheticDataset generate_synthetic(const SyntheticConfig& config);

}  // namespace sulfex
