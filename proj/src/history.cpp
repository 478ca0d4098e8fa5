#include "squirrel/history.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "squirrel/errors.hpp"

namespace squirrel {

const char *to_string(StageTag tag) {
  switch (tag) {
  case StageTag::warmstart:
    return "warmstart";
  case StageTag::de_init:
    return "de_init";
  case StageTag::bo:
    return "bo";
  case StageTag::de_final:
    return "de_final";
  }
  return "?";
}

StageTag stage_tag_from_string(const std::string &s) {
  if (s == "warmstart")
    return StageTag::warmstart;
  if (s == "de_init")
    return StageTag::de_init;
  if (s == "bo")
    return StageTag::bo;
  if (s == "de_final")
    return StageTag::de_final;
  throw ConfigError("unknown stage tag '" + s + "'");
}

void History::record(const Configuration &config, double y, int batch_index,
                     StageTag stage) {
  if (std::isnan(y)) {
    throw ConfigError("History::record: y must not be NaN");
  }
  if (!trials_.empty() && batch_index < trials_.back().batch_index) {
    throw ConfigError("History::record: batch_index must be non-decreasing");
  }
  Trial t;
  t.config = config;
  t.u = encode(space_, config);
  t.y = y;
  t.batch_index = batch_index;
  t.stage = stage;
  trials_.push_back(std::move(t));
  if (std::isfinite(y) &&
      (!incumbent_idx_ || y < trials_[*incumbent_idx_].y)) {
    incumbent_idx_ = trials_.size() - 1;
  }
}

std::optional<Incumbent> History::incumbent() const {
  if (!incumbent_idx_) {
    return std::nullopt;
  }
  const Trial &t = trials_[*incumbent_idx_];
  return Incumbent{*incumbent_idx_, t.config, t.y};
}

Design History::design_matrix() const {
  Design d;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool any_finite = false;
  for (const Trial &t : trials_) {
    if (std::isfinite(t.y)) {
      any_finite = true;
      lo = std::min(lo, t.y);
      hi = std::max(hi, t.y);
    }
  }
  if (!any_finite) {
    return d;
  }
  double imputed = hi + 3.0 * (hi - lo);
  d.x.reserve(trials_.size());
  d.y.reserve(trials_.size());
  for (const Trial &t : trials_) {
    d.x.push_back(t.u);
    d.y.push_back(std::isfinite(t.y) ? t.y : imputed);
  }
  return d;
}

std::size_t History::distinct_finite_values() const {
  std::set<double> values;
  for (const Trial &t : trials_) {
    if (std::isfinite(t.y)) {
      values.insert(t.y);
    }
  }
  return values.size();
}

namespace {

// Minimal CSV quoting: quote fields containing comma, quote, or newline.
std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_value_field(const std::string &s) {
  if (s == "inf") {
    return std::numeric_limits<double>::infinity();
  }
  if (s == "-inf") {
    return -std::numeric_limits<double>::infinity();
  }
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) {
      throw ConfigError("trailing characters in numeric field '" + s + "'");
    }
    return v;
  } catch (const std::exception &) {
    throw ConfigError("invalid numeric field '" + s + "'");
  }
}

} // namespace

void History::to_csv(std::ostream &out) const {
  out << "batch_index,stage_tag";
  for (const auto &p : space_.params()) {
    out << ',' << csv_field(p.name);
  }
  out << ",y\n";
  for (const Trial &t : trials_) {
    out << t.batch_index << ',' << to_string(t.stage);
    for (const auto &p : space_.params()) {
      const ParamValue &v = t.config.at(p.name);
      out << ',';
      if (std::holds_alternative<double>(v)) {
        out << format_double(std::get<double>(v));
      } else if (std::holds_alternative<std::int64_t>(v)) {
        out << std::get<std::int64_t>(v);
      } else {
        out << csv_field(std::get<std::string>(v));
      }
    }
    out << ',' << format_double(t.y) << '\n';
  }
}

History History::from_csv(ConfigSpace space, std::istream &in) {
  History h(std::move(space));
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("history CSV is empty");
  }
  auto header = split_csv_line(line);
  std::size_t expected = 3 + h.space_.dimension();
  if (header.size() != expected || header[0] != "batch_index" ||
      header[1] != "stage_tag" || header.back() != "y") {
    throw ConfigError("history CSV header does not match the space");
  }
  for (std::size_t i = 0; i < h.space_.dimension(); ++i) {
    if (header[2 + i] != h.space_.param(i).name) {
      throw ConfigError("history CSV column '" + header[2 + i] +
                        "' does not match parameter '" +
                        h.space_.param(i).name + "'");
    }
  }
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() != expected) {
      throw ConfigError("history CSV row has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(expected));
    }
    int batch = static_cast<int>(parse_value_field(fields[0]));
    StageTag tag = stage_tag_from_string(fields[1]);
    Configuration config;
    for (std::size_t i = 0; i < h.space_.dimension(); ++i) {
      const ParamSpec &p = h.space_.param(i);
      const std::string &field = fields[2 + i];
      switch (p.kind) {
      case ParamKind::continuous:
        config.set(p.name, parse_value_field(field));
        break;
      case ParamKind::integer:
        config.set(p.name,
                   static_cast<std::int64_t>(parse_value_field(field)));
        break;
      case ParamKind::categorical:
        config.set(p.name, field);
        break;
      }
    }
    h.record(config, parse_value_field(fields.back()), batch, tag);
  }
  return h;
}

} // namespace squirrel
