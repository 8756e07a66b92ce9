#include "sulfex/mixture.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "sulfex/error.hpp"

namespace sulfex {

std::string_view symbol(MixVar v) {
  switch (v) {
    case MixVar::WC: return "WC";
    case MixVar::C3A: return "C3A";
    case MixVar::C3S: return "C3S";
    case MixVar::C2S: return "C2S";
    case MixVar::C4AF: return "C4AF";
    case MixVar::CC: return "CC";
    case MixVar::Air: return "AIR";
  }
  return "?";
}

std::string_view column_name(MixVar v) {
  switch (v) {
    case MixVar::WC: return "wc";
    case MixVar::C3A: return "c3a";
    case MixVar::C3S: return "c3s";
    case MixVar::C2S: return "c2s";
    case MixVar::C4AF: return "c4af";
    case MixVar::CC: return "cement_content";
    case MixVar::Air: return "air";
  }
  return "?";
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::optional<MixVar> parse_mix_var(std::string_view text) {
  for (MixVar v : kAllMixVars)
    if (iequals(text, symbol(v)) || iequals(text, column_name(v))) return v;
  return std::nullopt;
}

std::optional<double> Mixture::get(MixVar v) const {
  switch (v) {
    case MixVar::WC: return wc;
    case MixVar::C3A: return c3a;
    case MixVar::C3S: return c3s;
    case MixVar::C2S: return c2s;
    case MixVar::C4AF: return c4af;
    case MixVar::CC: return cement_content;
    case MixVar::Air: return air;
  }
  return std::nullopt;
}

void Mixture::set(MixVar v, std::optional<double> value) {
  switch (v) {
    case MixVar::WC: wc = value; break;
    case MixVar::C3A: c3a = value; break;
    case MixVar::C3S: c3s = value; break;
    case MixVar::C2S: c2s = value; break;
    case MixVar::C4AF: c4af = value; break;
    case MixVar::CC: cement_content = value; break;
    case MixVar::Air: air = value; break;
  }
}

double Mixture::require(MixVar v) const {
  const auto value = get(v);
  if (!value)
    throw Error(ErrorCode::MissingField,
                "mixture '" + id + "' has no " + std::string(column_name(v)));
  return *value;
}

std::string range_problem(MixVar v, double value) {
  if (!std::isfinite(value)) return "not finite";
  std::ostringstream os;
  switch (v) {
    case MixVar::WC:
      if (!(value > 0.0 && value <= 1.0)) os << value << " outside (0, 1]";
      break;
    case MixVar::CC:
      if (!(value >= 0.0 && value <= 1.0)) os << value << " outside [0, 1]";
      break;
    default:
      if (!(value >= 0.0 && value <= 100.0)) os << value << " outside [0, 100]";
  }
  return os.str();
}

void validate_mixture(const Mixture& m) {
  for (MixVar v : kAllMixVars) {
    const auto value = m.get(v);
    if (!value) continue;
    const std::string problem = range_problem(v, *value);
    if (!problem.empty())
      throw Error(ErrorCode::RangeViolation,
                  "mixture '" + m.id + "' field " + std::string(column_name(v)) + ": " + problem);
  }
}

std::string_view to_string(GroupLabel g) {
  switch (g) {
    case GroupLabel::HN: return "HN";
    case GroupLabel::ML: return "ML";
    case GroupLabel::LL: return "LL";
  }
  return "?";
}

std::optional<GroupLabel> parse_group(std::string_view text) {
  for (GroupLabel g : kAllGroups)
    if (iequals(text, to_string(g))) return g;
  return std::nullopt;
}

}  // namespace sulfex
