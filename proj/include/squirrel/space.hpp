#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "squirrel/rng.hpp"

namespace squirrel {

enum class ParamKind { continuous, integer, categorical };

const char *to_string(ParamKind kind);

/// One typed parameter. Continuous/integer carry bounds and an optional log
/// scale; categorical carries an ordered list of distinct choice strings.
struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::continuous;
  double lower = 0.0;
  double upper = 0.0;
  bool log_scale = false;
  std::vector<std::string> choices;

  static ParamSpec make_continuous(std::string name, double lower,
                                   double upper, bool log_scale = false);
  static ParamSpec make_integer(std::string name, std::int64_t lower,
                                std::int64_t upper, bool log_scale = false);
  static ParamSpec make_categorical(std::string name,
                                    std::vector<std::string> choices);
};

using ParamValue = std::variant<double, std::int64_t, std::string>;

/// Native parameter assignment: one value per space parameter.
class Configuration {
public:
  Configuration() = default;

  void set(const std::string &name, ParamValue value);
  const ParamValue &at(const std::string &name) const;
  bool contains(const std::string &name) const;
  std::size_t size() const { return values_.size(); }
  const std::map<std::string, ParamValue> &values() const { return values_; }

  friend bool operator==(const Configuration &, const Configuration &) = default;

private:
  std::map<std::string, ParamValue> values_;
};

/// Point in the shared [0,1]^d geometry all surrogates and DE operate in.
using UnitVector = std::vector<double>;

/// Ordered, immutable mixed-type search space. Parameter order is canonical
/// (declaration order) and defines the unit-vector coordinate order.
class ConfigSpace {
public:
  ConfigSpace() = default;
  explicit ConfigSpace(std::vector<ParamSpec> params); // throws ConfigError

  std::size_t dimension() const { return params_.size(); }
  const std::vector<ParamSpec> &params() const { return params_; }
  const ParamSpec &param(std::size_t i) const { return params_[i]; }
  std::optional<std::size_t> index_of(const std::string &name) const;

private:
  std::vector<ParamSpec> params_;
};

/// Parse the space-spec document: a JSON array of parameter objects.
/// Unknown keys, duplicate names, and invalid bounds are rejected with the
/// offending parameter named.
ConfigSpace parse_space(const std::string &json_text);

/// Space-spec JSON text for a space (inverse of parse_space).
std::string space_to_json(const ConfigSpace &space);

/// Throws ConfigError unless config has exactly one in-bounds value per
/// parameter.
void validate_config(const ConfigSpace &space, const Configuration &config);

/// Map a valid configuration onto [0,1]^d.
UnitVector encode(const ConfigSpace &space, const Configuration &config);

/// Inverse of encode; total on the unit cube (integers round + clamp,
/// categoricals floor + clamp).
Configuration decode(const ConfigSpace &space, const UnitVector &u);

/// Decode of a uniform draw on the unit cube.
Configuration sample_random(const ConfigSpace &space, Rng &rng);

/// Canonical byte string of (dimension, sorted parameter descriptors). Two
/// spaces match iff their fingerprints are identical.
std::string fingerprint(const ConfigSpace &space);

/// Shortest round-trip decimal form of a double; byte-stable across runs.
std::string format_double(double v);

} // namespace squirrel
