#pragma once

#include <stdexcept>
#include <string>

namespace tbandit {

/// Invalid experiment configuration (bad preset, unknown TOML key, inconsistent
/// dimensions). The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A run could not continue: non-finite gradients, an uninformative proxy,
/// exhausted rejection sampling. The CLI maps it to exit code 3.
class RuntimeAbort : public std::runtime_error {
 public:
  explicit RuntimeAbort(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tbandit
