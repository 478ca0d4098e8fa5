#pragma once

#include <stdexcept>
#include <string>

namespace squirrel {

/// Bad user input: malformed spec files, out-of-bounds values, invalid options.
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

/// Ask/tell sequence violations: double-suggest, observe without suggest,
/// exhausted budgets. The CLI maps this to exit code 3.
class ProtocolError : public std::runtime_error {
public:
  explicit ProtocolError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace squirrel
