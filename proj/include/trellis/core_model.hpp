#pragma once

// Coordinate conventions and the four-position label candidate model.
//
// Screen space is y-down with the origin at the top-left of the viewport.
// A label is an axis-aligned rectangle touching its feature at one corner.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trellis {

using FeatureId = std::int64_t;

struct ScreenPoint {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const ScreenPoint&) const = default;
};

inline bool is_finite(ScreenPoint p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct Feature {
  FeatureId id = 0;
  ScreenPoint position;
  double priority = 0.0;  // larger is more important
  std::string text;

  bool operator==(const Feature&) const = default;
};

struct LabelDims {
  double width = 0.0;
  double height = 0.0;

  bool valid() const {
    return std::isfinite(width) && std::isfinite(height) && width > 0.0 && height > 0.0;
  }
  bool operator==(const LabelDims&) const = default;
};

// Throws std::invalid_argument for zero, negative or non-finite extents.
void require_valid(LabelDims dims);

struct Rect {
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;

  double width() const { return right - left; }
  double height() const { return bottom - top; }
  double area() const { return width() * height(); }
  bool valid() const { return left < right && top < bottom; }

  // Strictly inside; points on the boundary are not contained.
  bool strictly_contains(ScreenPoint p) const {
    return left < p.x && p.x < right && top < p.y && p.y < bottom;
  }

  bool operator==(const Rect&) const = default;
};

// Index order is cartographic preference order: UR is preferred, LL least.
enum class Corner : std::uint8_t { UR = 0, LR = 1, UL = 2, LL = 3 };

inline constexpr std::array<Corner, 4> kCorners{Corner::UR, Corner::LR, Corner::UL, Corner::LL};

constexpr std::size_t index_of(Corner c) { return static_cast<std::size_t>(c); }
constexpr Corner corner_at(std::size_t i) { return static_cast<Corner>(i); }

// Whether the candidate extends to the right of / above its feature.
constexpr bool extends_right(Corner c) { return c == Corner::UR || c == Corner::LR; }
constexpr bool extends_up(Corner c) { return c == Corner::UR || c == Corner::UL; }

std::string_view to_string(Corner c);
std::optional<Corner> parse_corner(std::string_view name);

Rect candidate_rect(ScreenPoint p, LabelDims dims, Corner c);

// Interior overlap. Rects sharing only an edge or a corner do not conflict.
inline bool rects_conflict(const Rect& a, const Rect& b) {
  return a.left < b.right && a.right > b.left && a.top < b.bottom && a.bottom > b.top;
}

// Maps world coordinates to the screen: screen = (world - offset) * scale.
struct Viewport {
  double width = 0.0;
  double height = 0.0;
  ScreenPoint offset;  // world coordinate shown at the screen origin
  double scale = 1.0;

  bool valid() const;
  ScreenPoint to_screen(ScreenPoint world) const {
    return {(world.x - offset.x) * scale, (world.y - offset.y) * scale};
  }
  ScreenPoint to_world(ScreenPoint screen) const {
    return {screen.x / scale + offset.x, screen.y / scale + offset.y};
  }
  bool contains(ScreenPoint screen) const {
    return screen.x >= 0.0 && screen.x < width && screen.y >= 0.0 && screen.y < height;
  }

  bool operator==(const Viewport&) const = default;
};

// Throws std::invalid_argument unless width, height and scale are positive.
void require_valid(const Viewport& view);

// Features within one label extent beyond each viewport edge take part in
// labeling, since their candidates can reach into the view.
inline bool within_margin(const Viewport& view, LabelDims dims, ScreenPoint p) {
  return p.x > -dims.width && p.x < view.width + dims.width && p.y > -dims.height &&
         p.y < view.height + dims.height;
}

// Adjacency over candidate slots. Slot s belongs to feature s / 4 (an index
// into the feature list the graph was built from) at corner s % 4. Each
// adjacency list is sorted ascending.
struct ConflictGraph {
  std::vector<std::vector<std::uint32_t>> adjacency;

  static constexpr std::uint32_t slot(std::size_t feature_index, Corner c) {
    return static_cast<std::uint32_t>(feature_index * 4 + index_of(c));
  }
  std::size_t edge_count() const;  // undirected
  bool operator==(const ConflictGraph&) const = default;
};

}  // namespace trellis
