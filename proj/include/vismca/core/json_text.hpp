#pragma once

#include <cmath>
#include <optional>
#include <string>

#include <json.hpp>

namespace vismca {

/// Deterministic JSON text: object keys in sorted order, floating-point
/// numbers always written with exactly six decimals, non-finite numbers as
/// null. indent < 0 gives compact output.
std::string canonical_dump(const nlohmann::json& value, int indent = -1);

inline nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace vismca
