#include "trellis/core_model.hpp"

#include <stdexcept>

namespace trellis {

void require_valid(LabelDims dims) {
  if (!dims.valid()) {
    throw std::invalid_argument("label dimensions must be finite and positive, got " +
                                std::to_string(dims.width) + "x" + std::to_string(dims.height));
  }
}

std::string_view to_string(Corner c) {
  switch (c) {
    case Corner::UR: return "UR";
    case Corner::LR: return "LR";
    case Corner::UL: return "UL";
    case Corner::LL: return "LL";
  }
  return "??";
}

std::optional<Corner> parse_corner(std::string_view name) {
  for (Corner c : kCorners) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

Rect candidate_rect(ScreenPoint p, LabelDims dims, Corner c) {
  Rect r;
  if (extends_right(c)) {
    r.left = p.x;
    r.right = p.x + dims.width;
  } else {
    r.left = p.x - dims.width;
    r.right = p.x;
  }
  if (extends_up(c)) {
    r.top = p.y - dims.height;
    r.bottom = p.y;
  } else {
    r.top = p.y;
    r.bottom = p.y + dims.height;
  }
  return r;
}

bool Viewport::valid() const {
  return std::isfinite(width) && std::isfinite(height) && width > 0.0 && height > 0.0 &&
         std::isfinite(scale) && scale > 0.0 && is_finite(offset);
}

void require_valid(const Viewport& view) {
  if (!view.valid()) {
    throw std::invalid_argument("viewport needs positive width, height and scale");
  }
}

std::size_t ConflictGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& list : adjacency) n += list.size();
  return n / 2;
}

}  // namespace trellis
