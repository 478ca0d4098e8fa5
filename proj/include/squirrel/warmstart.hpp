#pragma once

#include <optional>
#include <string>
#include <vector>

#include "squirrel/rng.hpp"
#include "squirrel/space.hpp"

namespace squirrel {

/// Meta-learned initial designs keyed by space fingerprint. Entries embed
/// their own space definition; stored order is the evaluation order.
class Registry {
public:
  struct Entry {
    ConfigSpace space;
    std::string fingerprint;
    std::vector<Configuration> configs;
  };

  Registry() = default;
  explicit Registry(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  const std::vector<Entry> &entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

private:
  std::vector<Entry> entries_;
};

/// Load and validate a registry file:
/// {"entries": [{"space": [...], "configs": [{name: value, ...}, ...]}]}.
/// Every stored configuration is checked against its embedded space; errors
/// name the offending entry.
Registry load_registry(const std::string &path);
Registry registry_from_json(const std::string &json_text);
std::string registry_to_json(const Registry &registry);

/// The stored configurations for an exact fingerprint match, else null.
const std::vector<Configuration> *match_space(const Registry &registry,
                                              const ConfigSpace &space);

/// Number of stored configurations per matched space (the remaining two of
/// the three 8-batches are random).
inline constexpr std::size_t kStoredDesignSize = 22;
inline constexpr std::size_t kInitialDesignSize = 24;

/// On a fingerprint match: exactly 24 configurations = stored list
/// truncated or padded-with-random to 22, plus 2 fresh random samples.
/// No match returns nullopt and the caller switches to DE initialization.
std::optional<std::vector<Configuration>>
initial_design(const Registry &registry, const ConfigSpace &space, Rng &rng);

} // namespace squirrel
