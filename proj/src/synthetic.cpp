#include "sulfex/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sulfex/random.hpp"

namespace sulfex {
namespace {

// Second-boundary line of the shipped bundle: C3S + 387.3 WC − 233.6.
constexpr double kSecondSlope = 387.3;
constexpr double kSecondOffset = 233.6;

Mixture sample_mixture(GroupLabel region, Rng& rng) {
  Mixture m;
  m.c4af = rng.uniform(6.0, 14.0);
  m.air = rng.uniform(1.0, 6.0);
  switch (region) {
    case GroupLabel::HN:
      m.c3a = rng.uniform(9.0, 13.0);
      m.wc = rng.uniform(0.40, 0.70);
      m.c3s = rng.uniform(35.0, 60.0);
      m.cement_content = rng.uniform(0.56, 0.64);
      break;
    case GroupLabel::ML:
      m.c3a = rng.uniform(2.5, 7.5);
      m.wc = rng.uniform(0.50, 0.58);
      m.c3s = kSecondOffset - kSecondSlope * *m.wc + rng.uniform(4.0, 20.0);
      m.cement_content = rng.uniform(0.40, 0.55);
      break;
    case GroupLabel::LL:
      m.c3a = rng.uniform(2.0, 7.5);
      m.wc = rng.uniform(0.38, 0.48);
      m.c3s = kSecondOffset - kSecondSlope * *m.wc - rng.uniform(4.0, 20.0);
      m.cement_content = rng.uniform(0.40, 0.55);
      break;
  }
  const double rest = 97.0 - *m.c3a - *m.c3s - *m.c4af;
  m.c2s = std::max(0.0, std::min(rng.uniform(10.0, 40.0), rest));
  return m;
}

GroupLabel wrong_region(GroupLabel g) {
  switch (g) {
    case GroupLabel::HN: return GroupLabel::LL;
    case GroupLabel::ML: return GroupLabel::LL;
    case GroupLabel::LL: return GroupLabel::ML;
  }
  return g;
}

}  // namespace

SyntheticDataset generate_synthetic(const SyntheticConfig& config) {
  if (!(config.noise >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise must be >= 0");
  if (!(config.mixture_effect >= 0.0 && config.mixture_effect < 1.0))
    throw Error(ErrorCode::InvalidArgument, "mixture_effect must be in [0, 1)");
  if (!(config.step_years > 0.0) || !(config.hn_step_years > 0.0) || !(config.record_years > 0.0))
    throw Error(ErrorCode::InvalidArgument, "record length and steps must be positive");

  const ModelBundle shipped = paper_default_bundle();
  Rng rng(config.seed);
  SyntheticDataset out;

  // Planted specimens are picked round-robin LL, ML, HN so a few of them
  // cover every group.
  std::array<std::size_t, 3> to_plant{0, 0, 0};
  {
    const GroupLabel cycle[] = {GroupLabel::LL, GroupLabel::ML, GroupLabel::HN};
    std::size_t remaining = config.planted_misclassified;
    for (std::size_t round = 0; remaining > 0; ++round) {
      bool any = false;
      for (GroupLabel g : cycle) {
        if (remaining == 0) break;
        if (to_plant[index_of(g)] < config.counts[index_of(g)]) {
          ++to_plant[index_of(g)];
          --remaining;
          any = true;
        }
      }
      if (!any) break;
    }
  }

  std::size_t serial = 0;
  for (GroupLabel g : kAllGroups) {
    for (std::size_t i = 0; i < config.counts[index_of(g)]; ++i) {
      const bool planted = i < to_plant[index_of(g)];
      MixtureRecord rec;
      rec.mixture = sample_mixture(planted ? wrong_region(g) : g, rng);
      if (planted && g == GroupLabel::HN) rec.mixture.cement_content = rng.uniform(0.56, 0.64);
      char id[32];
      std::snprintf(id, sizeof id, "S%04zu", ++serial);
      rec.mixture.id = id;
      rec.series.mixture_id = id;
      // drawn only when enabled so default datasets stay unchanged
      const double factor =
          config.mixture_effect > 0.0 ? std::max(0.05, 1.0 + config.mixture_effect * rng.normal()) : 1.0;

      if (g == GroupLabel::HN) {
        for (std::size_t k = 0;; ++k) {
          const double t = static_cast<double>(k) * config.hn_step_years;
          if (t > config.record_years) break;
          const double clean = factor * predict_expansion(rec.mixture, g, shipped, t);
          rec.series.samples.push_back({t, clean * (1.0 + config.noise * rng.normal())});
          if (clean > config.hn_stop_expansion) break;
        }
      } else {
        // Linear records keep going past record_years until they cross
        // linear_stop_expansion, so every specimen has an observed failure.
        for (std::size_t k = 0;; ++k) {
          const double t = static_cast<double>(k) * config.step_years;
          if (t > config.record_years * (1.0 + 1e-12)) {
            const double last = rec.series.samples.back().t;
            const double clean_last = factor * predict_expansion(rec.mixture, g, shipped, last);
            if (clean_last > config.linear_stop_expansion || t > curve::kMaxExtrapolatedYears) break;
          }
          const double clean = factor * predict_expansion(rec.mixture, g, shipped, t);
          rec.series.samples.push_back({t, clean * (1.0 + config.noise * rng.normal())});
        }
      }
      out.records.push_back(std::move(rec));
      out.truth.push_back(g);
      out.planted.push_back(planted);
    }
  }
  return out;
}

}  // namespace sulfex
