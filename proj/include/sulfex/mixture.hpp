#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace sulfex {

/// The seven mixture variables, in mixture-table column order.
enum class MixVar { WC, C3A, C3S, C2S, C4AF, CC, Air };

inline constexpr std::array<MixVar, 7> kAllMixVars = {MixVar::WC,   MixVar::C3A, MixVar::C3S, MixVar::C2S,
                                                      MixVar::C4AF, MixVar::CC,  MixVar::Air};

/// Short symbol ("WC", "C3A", ..., "CC", "AIR").
std::string_view symbol(MixVar v);
/// Mixture-table column name ("wc", "c3a", ..., "cement_content", "air").
std::string_view column_name(MixVar v);
/// Accepts either the symbol or the column name, case-insensitively.
std::optional<MixVar> parse_mix_var(std::string_view text);

/// One concrete mix proportion. Fields not needed by a given operation may be absent.
struct Mixture {
  std::string id;
  std::optional<double> wc;              ///< water-cement ratio, (0, 1]
  std::optional<double> c3a;             ///< percent
  std::optional<double> c3s;             ///< percent
  std::optional<double> c2s;             ///< percent
  std::optional<double> c4af;            ///< percent
  std::optional<double> cement_content;  ///< fraction, [0, 1]
  std::optional<double> air;             ///< percent

  std::optional<double> get(MixVar v) const;
  void set(MixVar v, std::optional<double> value);
  /// Throws MissingField naming the mixture and variable.
  double require(MixVar v) const;

  bool operator==(const Mixture&) const = default;
};

/// Returns an empty string when `value` is inside the variable's range, else a reason.
std::string range_problem(MixVar v, double value);

/// Throws RangeViolation for any present field outside its range.
void validate_mixture(const Mixture& m);

/// Expansion-pattern groups: high speed/nonlinear, moderate speed/linear,
/// low speed/linear.
enum class GroupLabel { HN, ML, LL };

inline constexpr std::array<GroupLabel, 3> kAllGroups = {GroupLabel::HN, GroupLabel::ML, GroupLabel::LL};

std::string_view to_string(GroupLabel g);
std::optional<GroupLabel> parse_group(std::string_view text);
inline std::size_t index_of(GroupLabel g) { return static_cast<std::size_t>(g); }

}  // namespace sulfex
