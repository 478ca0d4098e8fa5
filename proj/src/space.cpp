#include "squirrel/space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "squirrel/errors.hpp"

namespace squirrel {

using nlohmann::json;

const char *to_string(ParamKind kind) {
  switch (kind) {
  case ParamKind::continuous:
    return "continuous";
  case ParamKind::integer:
    return "integer";
  case ParamKind::categorical:
    return "categorical";
  }
  return "?";
}

std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

ParamSpec ParamSpec::make_continuous(std::string name, double lower,
                                     double upper, bool log_scale) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::continuous;
  p.lower = lower;
  p.upper = upper;
  p.log_scale = log_scale;
  return p;
}

ParamSpec ParamSpec::make_integer(std::string name, std::int64_t lower,
                                  std::int64_t upper, bool log_scale) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::integer;
  p.lower = static_cast<double>(lower);
  p.upper = static_cast<double>(upper);
  p.log_scale = log_scale;
  return p;
}

ParamSpec ParamSpec::make_categorical(std::string name,
                                      std::vector<std::string> choices) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::categorical;
  p.choices = std::move(choices);
  return p;
}

void Configuration::set(const std::string &name, ParamValue value) {
  values_[name] = std::move(value);
}

const ParamValue &Configuration::at(const std::string &name) const {
  auto it = values_.find(name);
  if (it == values_.end()) {
    throw ConfigError("configuration has no value for parameter '" + name +
                      "'");
  }
  return it->second;
}

bool Configuration::contains(const std::string &name) const {
  return values_.count(name) != 0;
}

namespace {

void validate_spec(const ParamSpec &p) {
  if (p.name.empty()) {
    throw ConfigError("parameter with empty name");
  }
  switch (p.kind) {
  case ParamKind::continuous:
    if (!(p.lower < p.upper)) {
      throw ConfigError("parameter '" + p.name +
                        "': continuous bounds must satisfy lower < upper");
    }
    break;
  case ParamKind::integer:
    if (p.lower != std::floor(p.lower) || p.upper != std::floor(p.upper)) {
      throw ConfigError("parameter '" + p.name +
                        "': integer bounds must be whole numbers");
    }
    if (!(p.lower <= p.upper)) {
      throw ConfigError("parameter '" + p.name +
                        "': integer bounds must satisfy lower <= upper");
    }
    break;
  case ParamKind::categorical: {
    if (p.choices.empty()) {
      throw ConfigError("parameter '" + p.name + "': choices must be non-empty");
    }
    std::set<std::string> seen;
    for (const auto &c : p.choices) {
      if (!seen.insert(c).second) {
        throw ConfigError("parameter '" + p.name + "': duplicate choice '" + c +
                          "'");
      }
    }
    if (p.log_scale) {
      throw ConfigError("parameter '" + p.name +
                        "': log_scale is not valid for categorical");
    }
    break;
  }
  }
  if (p.log_scale && !(p.lower > 0.0)) {
    throw ConfigError("parameter '" + p.name +
                      "': log_scale requires lower > 0");
  }
}

} // namespace

ConfigSpace::ConfigSpace(std::vector<ParamSpec> params)
    : params_(std::move(params)) {
  std::set<std::string> names;
  for (const auto &p : params_) {
    validate_spec(p);
    if (!names.insert(p.name).second) {
      throw ConfigError("duplicate parameter name '" + p.name + "'");
    }
  }
}

std::optional<std::size_t> ConfigSpace::index_of(const std::string &name) const {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) {
      return i;
    }
  }
  return std::nullopt;
}

ConfigSpace parse_space(const std::string &json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception &e) {
    throw ConfigError(std::string("space spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) {
    throw ConfigError("space spec must be a top-level JSON array");
  }

  std::vector<ParamSpec> params;
  for (const auto &item : doc) {
    if (!item.is_object()) {
      throw ConfigError("space spec entries must be objects");
    }
    std::string name = item.value("name", std::string{});
    if (name.empty()) {
      throw ConfigError("space spec entry missing \"name\"");
    }
    std::string kind = item.value("kind", std::string{});

    static const std::set<std::string> known_keys = {
        "name", "kind", "lower", "upper", "log_scale", "choices"};
    for (auto it = item.begin(); it != item.end(); ++it) {
      if (!known_keys.count(it.key())) {
        throw ConfigError("parameter '" + name + "': unknown key \"" +
                          it.key() + "\"");
      }
    }

    ParamSpec p;
    p.name = name;
    if (kind == "continuous" || kind == "integer") {
      p.kind = kind == "continuous" ? ParamKind::continuous : ParamKind::integer;
      if (!item.contains("lower") || !item.contains("upper") ||
          !item["lower"].is_number() || !item["upper"].is_number()) {
        throw ConfigError("parameter '" + name +
                          "': numeric \"lower\" and \"upper\" are required");
      }
      p.lower = item["lower"].get<double>();
      p.upper = item["upper"].get<double>();
      if (item.contains("log_scale")) {
        if (!item["log_scale"].is_boolean()) {
          throw ConfigError("parameter '" + name +
                            "': \"log_scale\" must be a boolean");
        }
        p.log_scale = item["log_scale"].get<bool>();
      }
      if (item.contains("choices")) {
        throw ConfigError("parameter '" + name +
                          "': \"choices\" is only valid for categorical");
      }
    } else if (kind == "categorical") {
      p.kind = ParamKind::categorical;
      if (!item.contains("choices") || !item["choices"].is_array()) {
        throw ConfigError("parameter '" + name +
                          "': categorical requires a \"choices\" array");
      }
      for (const auto &c : item["choices"]) {
        if (!c.is_string()) {
          throw ConfigError("parameter '" + name +
                            "': choices must be strings");
        }
        p.choices.push_back(c.get<std::string>());
      }
      if (item.contains("lower") || item.contains("upper") ||
          item.contains("log_scale")) {
        throw ConfigError("parameter '" + name +
                          "': bounds/log_scale are not valid for categorical");
      }
    } else {
      throw ConfigError("parameter '" + name + "': unknown kind \"" + kind +
                        "\"");
    }
    params.push_back(std::move(p));
  }
  return ConfigSpace(std::move(params));
}

std::string space_to_json(const ConfigSpace &space) {
  json arr = json::array();
  for (const auto &p : space.params()) {
    json item;
    item["name"] = p.name;
    item["kind"] = to_string(p.kind);
    if (p.kind == ParamKind::categorical) {
      item["choices"] = p.choices;
    } else {
      if (p.kind == ParamKind::integer) {
        item["lower"] = static_cast<std::int64_t>(p.lower);
        item["upper"] = static_cast<std::int64_t>(p.upper);
      } else {
        item["lower"] = p.lower;
        item["upper"] = p.upper;
      }
      if (p.log_scale) {
        item["log_scale"] = true;
      }
    }
    arr.push_back(std::move(item));
  }
  return arr.dump();
}

namespace {

double value_as_number(const ParamSpec &p, const ParamValue &v) {
  if (std::holds_alternative<double>(v)) {
    return std::get<double>(v);
  }
  if (std::holds_alternative<std::int64_t>(v)) {
    return static_cast<double>(std::get<std::int64_t>(v));
  }
  throw ConfigError("parameter '" + p.name + "': expected a numeric value");
}

} // namespace

void validate_config(const ConfigSpace &space, const Configuration &config) {
  if (config.size() != space.dimension()) {
    throw ConfigError("configuration has " + std::to_string(config.size()) +
                      " values, space has " +
                      std::to_string(space.dimension()) + " parameters");
  }
  for (const auto &p : space.params()) {
    if (!config.contains(p.name)) {
      throw ConfigError("configuration missing parameter '" + p.name + "'");
    }
    const ParamValue &v = config.at(p.name);
    switch (p.kind) {
    case ParamKind::continuous: {
      double x = value_as_number(p, v);
      if (std::isnan(x) || x < p.lower || x > p.upper) {
        throw ConfigError("parameter '" + p.name + "': value " +
                          format_double(x) + " outside [" +
                          format_double(p.lower) + ", " +
                          format_double(p.upper) + "]");
      }
      break;
    }
    case ParamKind::integer: {
      double x = value_as_number(p, v);
      if (x != std::floor(x)) {
        throw ConfigError("parameter '" + p.name +
                          "': expected an integer value");
      }
      if (x < p.lower || x > p.upper) {
        throw ConfigError("parameter '" + p.name + "': value " +
                          format_double(x) + " outside [" +
                          format_double(p.lower) + ", " +
                          format_double(p.upper) + "]");
      }
      break;
    }
    case ParamKind::categorical: {
      if (!std::holds_alternative<std::string>(v)) {
        throw ConfigError("parameter '" + p.name + "': expected a choice string");
      }
      const auto &s = std::get<std::string>(v);
      if (std::find(p.choices.begin(), p.choices.end(), s) == p.choices.end()) {
        throw ConfigError("parameter '" + p.name + "': unknown choice '" + s +
                          "'");
      }
      break;
    }
    }
  }
}

UnitVector encode(const ConfigSpace &space, const Configuration &config) {
  validate_config(space, config);
  UnitVector u(space.dimension());
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const ParamSpec &p = space.param(i);
    switch (p.kind) {
    case ParamKind::continuous: {
      double v = value_as_number(p, config.at(p.name));
      u[i] = p.log_scale
                 ? (std::log(v) - std::log(p.lower)) /
                       (std::log(p.upper) - std::log(p.lower))
                 : (v - p.lower) / (p.upper - p.lower);
      break;
    }
    case ParamKind::integer: {
      double v = value_as_number(p, config.at(p.name));
      if (p.log_scale) {
        // Degenerate single-value ranges map to the bucket center.
        u[i] = p.lower == p.upper
                   ? 0.5
                   : (std::log(v) - std::log(p.lower)) /
                         (std::log(p.upper) - std::log(p.lower));
      } else {
        // Half-integer widening: every integer owns an equal-width slab.
        u[i] = (v - p.lower + 0.5) / (p.upper - p.lower + 1.0);
      }
      break;
    }
    case ParamKind::categorical: {
      const auto &s = std::get<std::string>(config.at(p.name));
      auto it = std::find(p.choices.begin(), p.choices.end(), s);
      auto idx = static_cast<double>(it - p.choices.begin());
      u[i] = (idx + 0.5) / static_cast<double>(p.choices.size());
      break;
    }
    }
    u[i] = std::clamp(u[i], 0.0, 1.0);
  }
  return u;
}

Configuration decode(const ConfigSpace &space, const UnitVector &u) {
  if (u.size() != space.dimension()) {
    throw ConfigError("unit vector has dimension " + std::to_string(u.size()) +
                      ", space has " + std::to_string(space.dimension()));
  }
  Configuration config;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const ParamSpec &p = space.param(i);
    double ui = u[i];
    if (!(ui >= 0.0 && ui <= 1.0)) {
      throw ConfigError("parameter '" + p.name + "': coordinate " +
                        format_double(ui) + " outside [0, 1]");
    }
    switch (p.kind) {
    case ParamKind::continuous: {
      double v = p.log_scale
                     ? std::exp(std::log(p.lower) +
                                ui * (std::log(p.upper) - std::log(p.lower)))
                     : p.lower + ui * (p.upper - p.lower);
      config.set(p.name, std::clamp(v, p.lower, p.upper));
      break;
    }
    case ParamKind::integer: {
      double v;
      if (p.log_scale) {
        v = p.lower == p.upper
                ? p.lower
                : std::exp(std::log(p.lower) +
                           ui * (std::log(p.upper) - std::log(p.lower)));
      } else {
        v = (p.lower - 0.5) + ui * (p.upper - p.lower + 1.0);
      }
      double rounded = std::clamp(std::round(v), p.lower, p.upper);
      config.set(p.name, static_cast<std::int64_t>(rounded));
      break;
    }
    case ParamKind::categorical: {
      auto k = static_cast<double>(p.choices.size());
      auto idx = static_cast<std::size_t>(
          std::min(std::floor(ui * k), k - 1.0));
      config.set(p.name, p.choices[idx]);
      break;
    }
    }
  }
  return config;
}

Configuration sample_random(const ConfigSpace &space, Rng &rng) {
  UnitVector u(space.dimension());
  for (auto &coord : u) {
    coord = rng.next_double();
  }
  return decode(space, u);
}

std::string fingerprint(const ConfigSpace &space) {
  std::vector<std::string> parts;
  parts.reserve(space.dimension());
  for (const auto &p : space.params()) {
    std::ostringstream os;
    os << p.name << ':' << to_string(p.kind) << ':';
    if (p.kind == ParamKind::categorical) {
      os << '{';
      for (std::size_t i = 0; i < p.choices.size(); ++i) {
        if (i) {
          os << ',';
        }
        os << p.choices[i];
      }
      os << '}';
    } else {
      os << '[' << format_double(p.lower) << ',' << format_double(p.upper)
         << ']' << ':' << (p.log_scale ? "log" : "lin");
    }
    parts.push_back(os.str());
  }
  std::sort(parts.begin(), parts.end());
  std::string out = "d=" + std::to_string(space.dimension());
  for (const auto &part : parts) {
    out += ';';
    out += part;
  }
  return out;
}

} // namespace squirrel
