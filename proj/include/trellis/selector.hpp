#pragma once

// Greedy label selection in one pass over the features in priority order.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trellis/core_model.hpp"
#include "trellis/cost_engine.hpp"

namespace trellis {

struct Placement {
  FeatureId id = 0;
  ScreenPoint position;
  double priority = 0.0;
  std::string text;
  std::optional<Corner> corner;  // empty when unlabeled
  Rect rect;                     // meaningful only when labeled

  bool labeled() const { return corner.has_value(); }
  bool operator==(const Placement&) const = default;
};

struct LayoutStats {
  std::size_t total = 0;     // features handed in
  std::size_t indexed = 0;   // inside the view or its margin
  std::size_t margin = 0;    // indexed but outside the view itself
  std::size_t culled = 0;    // beyond the margin, not placed
  std::size_t labeled = 0;
  std::size_t unlabeled = 0;
  std::size_t skipped_occluded = 0;  // reached with every candidate already occluded
  std::uint64_t pair_tests = 0;      // neighbor pairs run through the dispatch table
  std::uint64_t predicate_evaluations = 0;
  double elapsed_ms = 0.0;

  bool operator==(const LayoutStats&) const = default;
};

struct Layout {
  Viewport view;
  LabelDims label;
  std::vector<Placement> placements;  // indexed features, in input order
  LayoutStats stats;

  bool operator==(const Layout&) const = default;
};

// Same placements and outcome counts. Timing and instrumentation counters
// are ignored.
bool layouts_match(const Layout& a, const Layout& b);

// Labels screen-space features. Throws std::invalid_argument on invalid dims,
// viewport or config.
Layout place_labels(std::span<const Feature> features, const Viewport& view, LabelDims dims,
                    const CostConfig& cfg = {});

// World-space features projected through `base`; level k uses label dims
// divided by factor^k. Throws std::invalid_argument unless levels >= 1 and
// factor > 1.
std::vector<Layout> precompute_zoom_levels(std::span<const Feature> world_features,
                                           const Viewport& base, LabelDims dims, int levels,
                                           double factor, const CostConfig& cfg = {});

// Projects world positions to the screen.
std::vector<Feature> project(std::span<const Feature> world_features, const Viewport& view);

// Feature indices in processing order: priority descending, id ascending.
std::vector<std::uint32_t> sweep_order(std::span<const Feature> features,
                                       std::span<const std::uint32_t> subset);

}  // namespace trellis
