#include "squirrel/warmstart.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "squirrel/errors.hpp"

namespace squirrel {

using nlohmann::json;

namespace {

ParamValue value_from_json(const ParamSpec &p, const json &v,
                           const std::string &where) {
  switch (p.kind) {
  case ParamKind::continuous:
    if (!v.is_number()) {
      throw ConfigError(where + ": parameter '" + p.name +
                        "' expects a number");
    }
    return v.get<double>();
  case ParamKind::integer:
    if (!v.is_number_integer()) {
      throw ConfigError(where + ": parameter '" + p.name +
                        "' expects an integer");
    }
    return v.get<std::int64_t>();
  case ParamKind::categorical:
    if (!v.is_string()) {
      throw ConfigError(where + ": parameter '" + p.name +
                        "' expects a choice string");
    }
    return v.get<std::string>();
  }
  throw ConfigError(where + ": unknown parameter kind");
}

} // namespace

Registry registry_from_json(const std::string &json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception &e) {
    throw ConfigError(std::string("registry file is not valid JSON: ") +
                      e.what());
  }
  if (!doc.is_object() || !doc.contains("entries") ||
      !doc["entries"].is_array()) {
    throw ConfigError("registry file must be {\"entries\": [...]}");
  }

  std::vector<Registry::Entry> entries;
  std::size_t index = 0;
  for (const auto &item : doc["entries"]) {
    std::string where = "registry entry " + std::to_string(index);
    if (!item.is_object() || !item.contains("space") ||
        !item.contains("configs") || !item["configs"].is_array()) {
      throw ConfigError(where + ": expected {\"space\": [...], \"configs\": [...]}");
    }

    Registry::Entry entry;
    entry.space = parse_space(item["space"].dump());
    entry.fingerprint = fingerprint(entry.space);

    for (const auto &cfg_json : item["configs"]) {
      if (!cfg_json.is_object()) {
        throw ConfigError(where + ": configs must be objects");
      }
      Configuration config;
      for (auto it = cfg_json.begin(); it != cfg_json.end(); ++it) {
        auto idx = entry.space.index_of(it.key());
        if (!idx) {
          throw ConfigError(where + ": unknown parameter '" + it.key() + "'");
        }
        config.set(it.key(),
                   value_from_json(entry.space.param(*idx), it.value(), where));
      }
      try {
        validate_config(entry.space, config);
      } catch (const ConfigError &e) {
        throw ConfigError(where + ": " + e.what());
      }
      entry.configs.push_back(std::move(config));
    }
    entries.push_back(std::move(entry));
    ++index;
  }
  return Registry(std::move(entries));
}

Registry load_registry(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open registry file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return registry_from_json(buf.str());
}

std::string registry_to_json(const Registry &registry) {
  json doc;
  doc["entries"] = json::array();
  for (const auto &entry : registry.entries()) {
    json item;
    item["space"] = json::parse(space_to_json(entry.space));
    item["configs"] = json::array();
    for (const auto &config : entry.configs) {
      json cfg = json::object();
      for (const auto &[name, value] : config.values()) {
        if (std::holds_alternative<double>(value)) {
          cfg[name] = std::get<double>(value);
        } else if (std::holds_alternative<std::int64_t>(value)) {
          cfg[name] = std::get<std::int64_t>(value);
        } else {
          cfg[name] = std::get<std::string>(value);
        }
      }
      item["configs"].push_back(std::move(cfg));
    }
    doc["entries"].push_back(std::move(item));
  }
  return doc.dump(2);
}

const std::vector<Configuration> *match_space(const Registry &registry,
                                              const ConfigSpace &space) {
  std::string fp = fingerprint(space);
  for (const auto &entry : registry.entries()) {
    if (entry.fingerprint == fp) {
      return &entry.configs;
    }
  }
  return nullptr;
}

std::optional<std::vector<Configuration>>
initial_design(const Registry &registry, const ConfigSpace &space, Rng &rng) {
  const auto *stored = match_space(registry, space);
  if (!stored) {
    return std::nullopt;
  }
  std::vector<Configuration> design;
  design.reserve(kInitialDesignSize);
  for (std::size_t i = 0; i < std::min(stored->size(), kStoredDesignSize); ++i) {
    design.push_back((*stored)[i]);
  }
  while (design.size() < kInitialDesignSize) {
    design.push_back(sample_random(space, rng));
  }
  return design;
}

} // namespace squirrel
