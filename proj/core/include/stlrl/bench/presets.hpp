#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "stlrl/stl/parser.hpp"

namespace stlrl {

/// A property file compiled into the library.
struct Preset {
  std::string_view name;
  std::string_view text;
};

/// All shipped presets: phi1 ... phi9 over the automatic-transmission
/// outputs, plus `unsat` and `invariant` for smoke tests.
std::span<const Preset> presets();

std::optional<std::string_view> preset_text(std::string_view name);

PropertyFile load_preset(std::string_view name, const ParamTable& overrides = {});

/// Reads `spec` as a file path if it names an existing file, otherwise as a
/// preset name (a trailing ".stl" is ignored).
PropertyFile load_property(const std::string& spec, const ParamTable& overrides = {});

/// Short label for reports: the preset name or the file stem.
std::string property_label(const std::string& spec);

}  // namespace stlrl
