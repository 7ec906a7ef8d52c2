#pragma once

// Built-in experiment presets reproducing the published runs.

#include <span>
#include <string_view>

#include "fch/experiment.hpp"

namespace fch {

struct Preset {
  std::string_view name;
  /// What the preset reproduces, for `fch presets`.
  std::string_view anchor;
  std::string_view json;
};

std::span<const Preset> presets();
const Preset* find_preset(std::string_view name);
/// Throws ConfigError for unknown names.
ExperimentConfig preset_config(std::string_view name);

}  // namespace fch
