#include "sulfex/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sulfex::io {

using json = nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Comma split with optional double quotes ("" escapes a quote).
std::vector<std::string> split_csv(const std::string& line, const std::string& where) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      cells.push_back(was_quoted ? cell : trim(cell));
      cell.clear();
      was_quoted = false;
    } else {
      cell += c;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, where + ": unterminated quote");
  cells.push_back(was_quoted ? cell : trim(cell));
  return cells;
}

struct Table {
  std::vector<std::string> header;
  struct Row {
    std::size_t line;
    std::vector<std::string> cells;
  };
  std::vector<Row> rows;
};

Table read_table(std::istream& in, const std::string& source) {
  Table t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (trim(line).empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    auto cells = split_csv(line, where);
    if (!have_header) {
      for (auto& c : cells) c = lower(c);
      t.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size())
      throw Error(ErrorCode::ParseError, where + ": expected " + std::to_string(t.header.size()) + " fields, found " +
                                             std::to_string(cells.size()));
    t.rows.push_back({lineno, std::move(cells)});
  }
  if (!have_header) throw Error(ErrorCode::EmptyInput, source + ": no rows (missing header)");
  if (t.rows.empty()) throw Error(ErrorCode::EmptyInput, source + ": no rows");
  return t;
}

std::optional<double> parse_number(const std::string& text) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec == std::errc::result_out_of_range) {
    // from_chars rejects subnormal/overflowing text; strtod gives the right limit
    v = std::strtod(text.c_str(), nullptr);
    ec = std::errc{};
  }
  if (ec != std::errc{} || p != e) return std::nullopt;
  return v;
}

double cell_number(const std::string& cell, const std::string& where, const std::string& field) {
  const auto v = parse_number(cell);
  if (!v) throw Error(ErrorCode::ParseError, where + ": field " + field + ": cannot parse '" + cell + "' as a number");
  if (!std::isfinite(*v)) throw Error(ErrorCode::NonFiniteValue, where + ": field " + field + ": value '" + cell + "' is not finite");
  return *v;
}

std::size_t column(const Table& t, std::string_view name, const std::string& source, bool required) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) {
    if (required) throw Error(ErrorCode::MissingField, source + ": missing column '" + std::string(name) + "'");
    return std::string::npos;
  }
  return static_cast<std::size_t>(it - t.header.begin());
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  return f;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  return f;
}

void finish(std::ofstream& f, const std::filesystem::path& path) {
  f.flush();
  if (!f) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<Mixture> read_mixtures(std::istream& in, const std::string& source) {
  const Table t = read_table(in, source);
  const std::size_t id_col = column(t, "id", source, true);
  std::array<std::size_t, 7> cols{};
  for (MixVar v : kAllMixVars) cols[static_cast<std::size_t>(v)] = column(t, column_name(v), source, false);
  for (const auto& h : t.header) {
    if (h == "id") continue;
    const auto v = parse_mix_var(h);
    if (!v || column_name(*v) != h) throw Error(ErrorCode::ParseError, source + ":1: unknown column '" + h + "'");
  }

  std::vector<Mixture> out;
  std::map<std::string, std::size_t> seen;
  for (const auto& row : t.rows) {
    const std::string where = source + ":" + std::to_string(row.line);
    Mixture m;
    m.id = row.cells[id_col];
    if (m.id.empty()) throw Error(ErrorCode::ParseError, where + ": field id: empty");
    if (auto [it, fresh] = seen.emplace(m.id, row.line); !fresh)
      throw Error(ErrorCode::DuplicateId,
                  where + ": id '" + m.id + "' already used on line " + std::to_string(it->second));
    for (MixVar v : kAllMixVars) {
      const std::size_t c = cols[static_cast<std::size_t>(v)];
      if (c == std::string::npos || row.cells[c].empty()) continue;
      const std::string field(column_name(v));
      const double value = cell_number(row.cells[c], where, field);
      if (const auto problem = range_problem(v, value); !problem.empty())
        throw Error(ErrorCode::RangeViolation, where + ": field " + field + ": " + problem);
      m.set(v, value);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Mixture> load_mixtures(const std::filesystem::path& path) {
  auto f = open_in(path);
  return read_mixtures(f, path.string());
}

std::vector<ExpansionSeries> read_series(std::istream& in, const std::string& source, ExpansionUnit unit) {
  const Table t = read_table(in, source);
  const std::size_t id_col = column(t, "mixture_id", source, true);
  const std::size_t t_col = column(t, "t_years", source, true);
  std::size_t e_col = column(t, "expansion_percent", source, false);
  std::string e_name = "expansion_percent";
  if (e_col == std::string::npos) {
    e_col = column(t, "expansion_fraction", source, false);
    e_name = "expansion_fraction";
  }
  if (e_col == std::string::npos) throw Error(ErrorCode::MissingField, source + ": missing column 'expansion_percent'");
  const double scale = unit == ExpansionUnit::Fraction ? 100.0 : 1.0;

  std::vector<ExpansionSeries> out;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> lines;
  for (const auto& row : t.rows) {
    const std::string where = source + ":" + std::to_string(row.line);
    const std::string& id = row.cells[id_col];
    if (id.empty()) throw Error(ErrorCode::ParseError, where + ": field mixture_id: empty");
    const double time = cell_number(row.cells[t_col], where, "t_years");
    if (time < 0.0) throw Error(ErrorCode::NegativeTime, where + ": field t_years: " + row.cells[t_col] + " < 0");
    const double value = cell_number(row.cells[e_col], where, e_name) * scale;
    auto [it, fresh] = index.emplace(id, out.size());
    if (fresh) {
      out.push_back({id, {}});
      lines.emplace_back();
    }
    out[it->second].samples.push_back({time, value});
    lines[it->second].push_back(row.line);
  }
  for (std::size_t s = 0; s < out.size(); ++s) {
    auto& samples = out[s].samples;
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return samples[a].t < samples[b].t; });
    std::vector<Sample> sorted;
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k > 0 && samples[order[k]].t == samples[order[k - 1]].t)
        throw Error(ErrorCode::DuplicateTimestamp,
                    source + ":" + std::to_string(lines[s][order[k]]) + ": mixture '" + out[s].mixture_id +
                        "' has t_years = " + format_double(samples[order[k]].t) + " already on line " +
                        std::to_string(lines[s][order[k - 1]]));
      sorted.push_back(samples[order[k]]);
    }
    samples = std::move(sorted);
  }
  return out;
}

std::vector<ExpansionSeries> load_series(const std::filesystem::path& path, ExpansionUnit unit) {
  auto f = open_in(path);
  return read_series(f, path.string(), unit);
}

void write_mixtures(std::ostream& out, const std::vector<Mixture>& mixtures) {
  out << "id";
  for (MixVar v : kAllMixVars) out << ',' << column_name(v);
  out << '\n';
  for (const auto& m : mixtures) {
    out << m.id;
    for (MixVar v : kAllMixVars) {
      out << ',';
      if (const auto value = m.get(v)) out << format_double(*value);
    }
    out << '\n';
  }
}

void write_series(std::ostream& out, const std::vector<ExpansionSeries>& series) {
  out << "mixture_id,t_years,expansion_percent\n";
  for (const auto& s : series)
    for (const auto& p : s.samples) out << s.mixture_id << ',' << format_double(p.t) << ',' << format_double(p.exp) << '\n';
}

std::vector<MixtureRecord> join(const std::vector<Mixture>& mixtures, const std::vector<ExpansionSeries>& series) {
  std::map<std::string, const ExpansionSeries*> by_id;
  for (const auto& s : series) by_id[s.mixture_id] = &s;
  std::set<std::string> used;
  std::vector<MixtureRecord> out;
  for (const auto& m : mixtures) {
    const auto it = by_id.find(m.id);
    if (it == by_id.end()) throw Error(ErrorCode::MissingField, "mixture '" + m.id + "' has no expansion series");
    out.push_back({m, *it->second});
    used.insert(m.id);
  }
  for (const auto& s : series)
    if (!used.count(s.mixture_id))
      throw Error(ErrorCode::MissingField, "series '" + s.mixture_id + "' has no matching mixture");
  return out;
}

namespace {

int major_version(const std::string& v, const std::string& where) {
  int major = 0;
  const auto dot = v.find('.');
  const std::string head = v.substr(0, dot);
  const auto [p, ec] = std::from_chars(head.data(), head.data() + head.size(), major);
  if (ec != std::errc{} || p != head.data() + head.size() || head.empty())
    throw Error(ErrorCode::ParseError, where + ": schema_version '" + v + "' is not of the form MAJOR.MINOR");
  return major;
}

void check_version(const json& doc, const std::string& where) {
  if (!doc.contains("schema_version") || !doc["schema_version"].is_string())
    throw Error(ErrorCode::ParseError, where + ": missing schema_version");
  const std::string v = doc["schema_version"].get<std::string>();
  if (major_version(v, where) != major_version(kSchemaVersion, "built-in"))
    throw Error(ErrorCode::SchemaVersionMismatch,
                where + ": schema_version " + v + " is not compatible with " + kSchemaVersion);
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& path) {
  auto f = open_in(path);
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  const std::string where = path.string();
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, where + ": manifest must be a JSON object");
  check_version(doc, where);
  DatasetManifest m;
  m.schema_version = doc["schema_version"].get<std::string>();
  const auto base = path.parent_path();
  for (const char* key : {"mixtures", "series"}) {
    if (!doc.contains(key) || !doc[key].is_string())
      throw Error(ErrorCode::ParseError, where + ": field " + key + ": expected a path string");
    std::filesystem::path p = doc[key].get<std::string>();
    if (p.is_relative()) p = base / p;
    if (!std::filesystem::exists(p)) throw Error(ErrorCode::IoError, where + ": field " + key + ": '" + p.string() + "' does not exist");
    (std::string_view(key) == "mixtures" ? m.mixtures_path : m.series_path) = p;
  }
  if (doc.contains("expansion_unit")) {
    const auto u = doc["expansion_unit"].is_string() ? doc["expansion_unit"].get<std::string>() : std::string();
    if (u == "percent") m.unit = ExpansionUnit::Percent;
    else if (u == "fraction") m.unit = ExpansionUnit::Fraction;
    else throw Error(ErrorCode::ParseError, where + ": field expansion_unit: expected \"percent\" or \"fraction\"");
  }
  return m;
}

std::vector<MixtureRecord> load_dataset(const DatasetManifest& manifest) {
  return join(load_mixtures(manifest.mixtures_path), load_series(manifest.series_path, manifest.unit));
}

void save_dataset(const std::vector<MixtureRecord>& records, const std::filesystem::path& dir,
                  const std::vector<GroupLabel>* truth) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "': " + ec.message());
  std::vector<Mixture> mixtures;
  std::vector<ExpansionSeries> series;
  for (const auto& r : records) {
    mixtures.push_back(r.mixture);
    series.push_back(r.series);
  }
  {
    auto f = open_out(dir / "mixtures.csv");
    write_mixtures(f, mixtures);
    finish(f, dir / "mixtures.csv");
  }
  {
    auto f = open_out(dir / "series.csv");
    write_series(f, series);
    finish(f, dir / "series.csv");
  }
  {
    json doc = {{"schema_version", kSchemaVersion},
                {"mixtures", "mixtures.csv"},
                {"series", "series.csv"},
                {"expansion_unit", "percent"}};
    auto f = open_out(dir / "manifest.json");
    f << doc.dump(2) << '\n';
    finish(f, dir / "manifest.json");
  }
  if (truth) {
    if (truth->size() != records.size())
      throw Error(ErrorCode::DimensionMismatch, "truth labels do not match the records");
    auto f = open_out(dir / "truth.csv");
    f << "id,group\n";
    for (std::size_t i = 0; i < records.size(); ++i) f << records[i].mixture.id << ',' << to_string((*truth)[i]) << '\n';
    finish(f, dir / "truth.csv");
  }
}

// ---- bundle document ----

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json numbers(const Vector& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

json boundary_json(const LinearBoundary& b) {
  return {{"features", {b.feature_names()[0], b.feature_names()[1]}},
          {"weights", {number(b.weights()[0]), number(b.weights()[1])}},
          {"bias", number(b.bias())},
          {"box_constraint", number(b.box_constraint())},
          {"equation", b.equation()}};
}

json model_json(const GroupModel& m) {
  json terms = json::array();
  for (const auto& t : m.terms) terms.push_back(t.name());
  json j = {{"form", std::string(to_string(m.form))}, {"terms", terms}, {"coefficients", numbers(m.coefficients)}};
  if (m.fit) {
    j["fit"] = {{"coefficients", numbers(m.fit->coefficients)},
                {"r_squared", number(m.fit->r_squared)},
                {"residual_std", number(m.fit->residual_std)},
                {"t_statistics", numbers(m.fit->t_statistics)},
                {"n_observations", m.fit->n_observations}};
  } else {
    j["fit"] = nullptr;
  }
  return j;
}

// Reader that tracks the path inside the document for error messages and
// reports keys it does not know.
class Reader {
 public:
  Reader(const json& node, std::string path, std::vector<std::string>* warnings)
      : node_(node), path_(std::move(path)), warnings_(warnings) {
    if (!node_.is_object()) fail("expected an object");
  }

  Reader child(const std::string& key) const { return Reader(get(key), sub(key), warnings_); }

  const json& get(const std::string& key) const {
    used_.insert(key);
    if (!node_.contains(key)) fail("missing field '" + key + "'");
    return node_.at(key);
  }
  bool has(const std::string& key) const {
    used_.insert(key);
    return node_.contains(key) && !node_.at(key).is_null();
  }

  double num(const std::string& key) const { return to_double(get(key), sub(key)); }
  Vector nums(const std::string& key) const {
    const json& a = get(key);
    if (!a.is_array()) throw Error(ErrorCode::ParseError, "bundle: " + sub(key) + ": expected an array");
    Vector v;
    for (std::size_t i = 0; i < a.size(); ++i) v.push_back(to_double(a[i], sub(key) + "[" + std::to_string(i) + "]"));
    return v;
  }
  std::string str(const std::string& key) const {
    const json& s = get(key);
    if (!s.is_string()) throw Error(ErrorCode::ParseError, "bundle: " + sub(key) + ": expected a string");
    return s.get<std::string>();
  }
  std::vector<std::string> strs(const std::string& key) const {
    const json& a = get(key);
    if (!a.is_array()) throw Error(ErrorCode::ParseError, "bundle: " + sub(key) + ": expected an array");
    std::vector<std::string> out;
    for (const auto& s : a) {
      if (!s.is_string()) throw Error(ErrorCode::ParseError, "bundle: " + sub(key) + ": expected strings");
      out.push_back(s.get<std::string>());
    }
    return out;
  }

  /// Call after reading; warns about every key that was never asked for.
  void finish() const {
    if (!warnings_) return;
    for (const auto& [key, value] : node_.items())
      if (!used_.count(key)) warnings_->push_back("bundle: unknown field '" + sub(key) + "' ignored");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, "bundle: " + (path_.empty() ? std::string("document") : path_) + ": " + what);
  }

  static double to_double(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s == "inf") return std::numeric_limits<double>::infinity();
      if (s == "-inf") return -std::numeric_limits<double>::infinity();
      if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
      if (const auto d = parse_number(trim(s))) return *d;
    }
    throw Error(ErrorCode::ParseError, "bundle: " + where + ": expected a number");
  }

 private:
  std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& node_;
  std::string path_;
  std::vector<std::string>* warnings_;
  mutable std::set<std::string> used_;
};

LinearBoundary read_boundary(const Reader& r) {
  const auto names = r.strs("features");
  const auto w = r.nums("weights");
  if (names.size() != 2 || w.size() != 2) r.fail("a boundary needs exactly two features and two weights");
  LinearBoundary b;
  try {
    b = LinearBoundary({names[0], names[1]}, {w[0], w[1]}, r.num("bias"), r.num("box_constraint"));
  } catch (const Error& e) {
    r.fail(e.detail());
  }
  r.has("equation");  // derived from the rest; not read back
  r.finish();
  return b;
}

GroupModel read_model(const Reader& r, GroupLabel g) {
  GroupModel m;
  m.group = g;
  const auto form = parse_model_form(r.str("form"));
  if (!form) r.fail("form must be \"linear\" or \"log-linear\"");
  m.form = *form;
  for (const auto& name : r.strs("terms")) {
    const auto term = Term::parse(name);
    if (!term) r.fail("unknown term '" + name + "'");
    m.terms.push_back(*term);
  }
  m.coefficients = r.nums("coefficients");
  if (m.coefficients.size() != m.terms.size()) r.fail("coefficient count does not match the terms");
  if (r.has("fit")) {
    const Reader f = r.child("fit");
    OLSFit fit;
    fit.coefficients = f.nums("coefficients");
    fit.r_squared = f.num("r_squared");
    fit.residual_std = f.num("residual_std");
    fit.t_statistics = f.nums("t_statistics");
    const json& n = f.get("n_observations");
    if (!n.is_number_unsigned()) f.fail("n_observations must be a non-negative integer");
    fit.n_observations = n.get<std::size_t>();
    f.finish();
    m.fit = std::move(fit);
  }
  r.finish();
  return m;
}

}  // namespace

std::string bundle_to_json(const ModelBundle& b) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["failure_threshold"] = number(b.failure_threshold);
  json prov = {{"kind", std::string(to_string(b.provenance.kind))},
               {"dataset_hash", b.provenance.dataset_hash},
               {"note", b.provenance.note}};
  prov["seed"] = b.provenance.seed ? json(*b.provenance.seed) : json(nullptr);
  doc["provenance"] = prov;
  doc["training_time_range"] = b.training_time_range
                                   ? json::array({number((*b.training_time_range)[0]), number((*b.training_time_range)[1])})
                                   : json(nullptr);
  json models = json::object();
  for (GroupLabel g : kAllGroups)
    if (b.has_model(g)) models[std::string(to_string(g))] = model_json(b.model(g));
  doc["models"] = models;
  json bounds = json::object();
  if (b.boundary_first) bounds["first"] = boundary_json(*b.boundary_first);
  if (b.boundary_first_simplified) bounds["first_simplified"] = boundary_json(*b.boundary_first_simplified);
  if (b.boundary_second) bounds["second"] = boundary_json(*b.boundary_second);
  doc["boundaries"] = bounds;
  return doc.dump(2) + "\n";
}

ModelBundle bundle_from_json(const std::string& text, std::vector<std::string>* warnings) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("bundle: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "bundle: document must be a JSON object");
  check_version(doc, "bundle");

  const Reader r(doc, "", warnings);
  r.get("schema_version");
  ModelBundle b;
  b.failure_threshold = r.num("failure_threshold");

  const Reader prov = r.child("provenance");
  const std::string kind = prov.str("kind");
  if (kind == "paper-default") b.provenance.kind = Provenance::Kind::PaperDefault;
  else if (kind == "fitted") b.provenance.kind = Provenance::Kind::Fitted;
  else prov.fail("kind must be \"paper-default\" or \"fitted\"");
  b.provenance.dataset_hash = prov.has("dataset_hash") ? prov.str("dataset_hash") : std::string();
  b.provenance.note = prov.has("note") ? prov.str("note") : std::string();
  if (prov.has("seed")) {
    const json& s = prov.get("seed");
    if (!s.is_number_unsigned()) prov.fail("seed must be a non-negative integer");
    b.provenance.seed = s.get<std::uint64_t>();
  }
  prov.finish();

  if (r.has("training_time_range")) {
    const Vector range = r.nums("training_time_range");
    if (range.size() != 2) r.fail("training_time_range must hold two numbers");
    b.training_time_range = std::array<double, 2>{range[0], range[1]};
  }

  const Reader models = r.child("models");
  for (GroupLabel g : kAllGroups) {
    const std::string key(to_string(g));
    if (models.has(key)) b.models[index_of(g)] = read_model(models.child(key), g);
  }
  models.finish();

  const Reader bounds = r.child("boundaries");
  if (bounds.has("first")) b.boundary_first = read_boundary(bounds.child("first"));
  if (bounds.has("first_simplified")) b.boundary_first_simplified = read_boundary(bounds.child("first_simplified"));
  if (bounds.has("second")) b.boundary_second = read_boundary(bounds.child("second"));
  bounds.finish();

  r.finish();
  return b;
}

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
  auto f = open_out(path);
  f << bundle_to_json(bundle);
  finish(f, path);
}

ModelBundle load_bundle(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  auto f = open_in(path);
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return bundle_from_json(ss.str(), warnings);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail(), e.stage());
  }
}

void write_plot_data(std::ostream& out, const std::vector<LabeledSeries>& series) {
  if (series.empty()) throw Error(ErrorCode::EmptyInput, "no series to write");
  out << "series_label,t,value\n";
  for (const auto& s : series)
    for (const auto& p : s.samples) out << s.label << ',' << format_double(p.t) << ',' << format_double(p.exp) << '\n';
}

void emit_plot_data(const std::vector<LabeledSeries>& series, const std::filesystem::path& path) {
  if (series.empty()) throw Error(ErrorCode::EmptyInput, "no series to write to '" + path.string() + "'");
  auto f = open_out(path);
  write_plot_data(f, series);
  finish(f, path);
}

}  // namespace sulfex::io
