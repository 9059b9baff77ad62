#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tbandit/harness/experiment.hpp"

namespace tbandit::harness {

struct PresetInfo {
  std::string name;
  std::string description;
};

std::vector<PresetInfo> list_presets();

/// Fully specified experiment for a named preset; throws ConfigError for an
/// unknown name.
ExperimentConfig make_preset(std::string_view name);

/// Proxy mechanism shared by the proxy_* presets (dense surrogate of the
/// IHDP / MNIST generators).
env::ProxyParams surrogate_proxy(std::size_t dim_w);

}  // namespace tbandit::harness
