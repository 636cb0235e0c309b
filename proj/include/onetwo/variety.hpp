#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace onetwo {

/// Increasing 1-2 trees with unordered (NonPlane) or ordered (Plane) children.
enum class TreeVariety { NonPlane, Plane };

inline std::string_view variety_name(TreeVariety v) {
  return v == TreeVariety::NonPlane ? "nonplane" : "plane";
}

inline std::optional<TreeVariety> parse_variety(std::string_view s) {
  if (s == "nonplane" || s == "non-plane") return TreeVariety::NonPlane;
  if (s == "plane") return TreeVariety::Plane;
  return std::nullopt;
}

}  // namespace onetwo
