#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sulfex/domain.hpp"
#include "sulfex/regression.hpp"

namespace sulfex::io {

inline constexpr const char* kSchemaVersion = "1.0";

enum class ExpansionUnit { Percent, Fraction };

/// Mixture table: comma-separated, header row naming the columns
///   id, wc, c3a, c3s, c2s, c4af, cement_content, air
/// in any order. Only `id` is mandatory; empty cells are absent values.
/// Errors name the source, line and field: ParseError, RangeViolation,
/// NonFiniteValue, DuplicateId, EmptyInput ("no rows").
std::vector<Mixture> read_mixtures(std::istream& in, const std::string& source);
std::vector<Mixture> load_mixtures(const std::filesystem::path& path);

/// Long-format expansion table with header mixture_id, t_years,
/// expansion_percent (or expansion_fraction). Rows may come in any order;
/// series keep the order in which their ids first appear and are sorted by
/// time. With ExpansionUnit::Fraction values are multiplied by 100.
/// Errors: ParseError, NonFiniteValue, NegativeTime, DuplicateTimestamp, EmptyInput.
std::vector<ExpansionSeries> read_series(std::istream& in, const std::string& source,
                                         ExpansionUnit unit = ExpansionUnit::Percent);
std::vector<ExpansionSeries> load_series(const std::filesystem::path& path, ExpansionUnit unit = ExpansionUnit::Percent);

void write_mixtures(std::ostream& out, const std::vector<Mixture>& mixtures);
void write_series(std::ostream& out, const std::vector<ExpansionSeries>& series);

/// Pairs every mixture with its series by id. A mixture without a series or
/// a series without a mixture is a MissingField error.
std::vector<MixtureRecord> join(const std::vector<Mixture>& mixtures, const std::vector<ExpansionSeries>& series);

/// JSON manifest:
///   {"schema_version": "1.0", "mixtures": "mixtures.csv",
///    "series": "series.csv", "expansion_unit": "percent"}
/// Relative paths are resolved against the manifest's directory.
struct DatasetManifest {
  std::string schema_version = kSchemaVersion;
  std::filesystem::path mixtures_path;
  std::filesystem::path series_path;
  ExpansionUnit unit = ExpansionUnit::Percent;
};

DatasetManifest load_manifest(const std::filesystem::path& path);
std::vector<MixtureRecord> load_dataset(const DatasetManifest& manifest);
inline std::vector<MixtureRecord> load_dataset(const std::filesystem::path& manifest_path) {
  return load_dataset(load_manifest(manifest_path));
}

/// Writes mixtures.csv, series.csv and manifest.json into `dir` (created if
/// needed); with `truth`, also truth.csv (id, group).
void save_dataset(const std::vector<MixtureRecord>& records, const std::filesystem::path& dir,
                  const std::vector<GroupLabel>* truth = nullptr);

/// Bundle document (JSON). Doubles are written in shortest round-trip form
/// so save/load is bit-exact; non-finite values are written as the strings
/// "inf", "-inf" and "nan". Numbers given as strings are accepted on load.
std::string bundle_to_json(const ModelBundle& bundle);
/// Unknown fields are skipped and reported through `warnings`. A different
/// major schema version throws SchemaVersionMismatch; malformed documents
/// and missing fields throw ParseError.
ModelBundle bundle_from_json(const std::string& text, std::vector<std::string>* warnings = nullptr);

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

struct LabeledSeries {
  std::string label;
  std::vector<Sample> samples;
};

/// Tidy table series_label,t,value. An empty list is EmptyInput; an
/// unwritable path is IoError.
void write_plot_data(std::ostream& out, const std::vector<LabeledSeries>& series);
void emit_plot_data(const std::vector<LabeledSeries>& series, const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace sulfex::io
