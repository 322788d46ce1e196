#include "stlrl/bench/presets.hpp"

#include <filesystem>
#include <stdexcept>

namespace stlrl {

std::optional<std::string_view> preset_text(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p.text;
  }
  return std::nullopt;
}

PropertyFile load_preset(std::string_view name, const ParamTable& overrides) {
  auto text = preset_text(name);
  if (!text) throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  return parse_property_file(*text, overrides);
}

PropertyFile load_property(const std::string& spec, const ParamTable& overrides) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(spec, ec)) return load_property_file(spec, overrides);
  std::string name = std::filesystem::path(spec).filename().string();
  if (name.ends_with(".stl")) name.resize(name.size() - 4);
  if (preset_text(name)) return load_preset(name, overrides);
  throw std::invalid_argument("'" + spec + "' is neither a property file nor a preset name");
}

std::string property_label(const std::string& spec) {
  return std::filesystem::path(spec).stem().string();
}

}  // namespace stlrl
