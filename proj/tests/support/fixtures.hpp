#pragma once

// Random instance generators shared by the unit and acceptance suites.

#include <cstdint>
#include <random>
#include <vector>

#include "trellis/core_model.hpp"
#include "trellis/selector.hpp"

namespace trellis::testing {

inline std::vector<Feature> uniform_features(std::mt19937_64& rng, std::size_t n, double width,
                                             double height) {
  std::uniform_real_distribution<double> ux(0.0, width), uy(0.0, height);
  std::vector<Feature> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].id = static_cast<FeatureId>(i);
    out[i].position = {ux(rng), uy(rng)};
    out[i].priority = static_cast<double>(rng() % (n + 1));  // ties on purpose
  }
  return out;
}

inline std::vector<Feature> clustered_features(std::mt19937_64& rng, std::size_t n, double width,
                                               double height, int clusters, double sigma) {
  std::uniform_real_distribution<double> ux(0.0, width), uy(0.0, height);
  std::vector<ScreenPoint> centers(static_cast<std::size_t>(clusters));
  for (auto& c : centers) c = {ux(rng), uy(rng)};
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<Feature> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ScreenPoint c = centers[rng() % centers.size()];
    out[i].id = static_cast<FeatureId>(i);
    out[i].position = {c.x + g(rng), c.y + g(rng)};
    out[i].priority = static_cast<double>(rng() % (n + 1));
  }
  return out;
}

// Integer multiples of the trellis cell size, so features sit on grid
// lines and many displacements hit comparison thresholds exactly.
inline std::vector<Feature> grid_aligned_features(std::mt19937_64& rng, std::size_t n,
                                                  LabelDims dims, int cols, int rows) {
  std::vector<Feature> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].id = static_cast<FeatureId>(i);
    out[i].position = {static_cast<double>(rng() % static_cast<unsigned>(cols)) * dims.width / 2,
                       static_cast<double>(rng() % static_cast<unsigned>(rows)) * dims.height / 2};
    out[i].priority = static_cast<double>(rng() % 4);
  }
  return out;
}

struct PlacementCheck {
  std::size_t overlaps = 0;
  std::size_t misanchored = 0;
  std::size_t unjustified = 0;  // unlabeled without a blocker on every candidate
  bool top_labeled = true;
};

// Post-hoc, all-pairs audit of a layout.
inline PlacementCheck audit(const Layout& layout) {
  PlacementCheck r;
  const auto& p = layout.placements;
  std::vector<std::size_t> placed;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p[i].labeled()) continue;
    placed.push_back(i);
    if (!(p[i].rect == candidate_rect(p[i].position, layout.label, *p[i].corner))) ++r.misanchored;
  }
  for (std::size_t a = 0; a < placed.size(); ++a) {
    for (std::size_t b = a + 1; b < placed.size(); ++b) {
      if (rects_conflict(p[placed[a]].rect, p[placed[b]].rect)) ++r.overlaps;
    }
  }
  auto outranks = [](const Placement& a, const Placement& b) {
    return a.priority > b.priority || (a.priority == b.priority && a.id < b.id);
  };
  for (const Placement& u : p) {
    if (u.labeled()) continue;
    for (Corner c : kCorners) {
      const Rect cand = candidate_rect(u.position, layout.label, c);
      bool blocked = false;
      for (std::size_t i : placed) {
        if (outranks(p[i], u) && rects_conflict(cand, p[i].rect)) {
          blocked = true;
          break;
        }
      }
      if (!blocked) {
        ++r.unjustified;
        break;
      }
    }
  }
  if (!p.empty()) {
    const Placement* top = &p[0];
    for (const Placement& q : p) {
      if (outranks(q, *top)) top = &q;
    }
    r.top_labeled = top->labeled();
  }
  return r;
}

}  // namespace trellis::testing
