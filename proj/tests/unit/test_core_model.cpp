#include <doctest.h>

#include <stdexcept>

#include <random>

#include "trellis/core_model.hpp"

using namespace trellis;

TEST_CASE("candidate_rect anchors the feature at the named corner") {
  const LabelDims d{150, 12};
  CHECK(candidate_rect({100, 100}, d, Corner::UR) == Rect{100, 88, 250, 100});
  CHECK(candidate_rect({100, 100}, d, Corner::LR) == Rect{100, 100, 250, 112});
  CHECK(candidate_rect({100, 100}, d, Corner::UL) == Rect{-50, 88, 100, 100});
  CHECK(candidate_rect({0, 0}, d, Corner::LL) == Rect{-150, 0, 0, 12});
}

TEST_CASE("rects_conflict is strict") {
  const Rect a{0, 0, 10, 10};
  CHECK(rects_conflict(a, a));
  CHECK_FALSE(rects_conflict(a, Rect{10, 0, 20, 10}));
  CHECK_FALSE(rects_conflict(a, Rect{0, 10, 10, 20}));
  CHECK_FALSE(rects_conflict(a, Rect{10, 10, 20, 20}));
  CHECK_FALSE(rects_conflict(a, Rect{50, 50, 60, 60}));
  CHECK(rects_conflict(a, Rect{9.5, 9.5, 20, 20}));
}

TEST_CASE("sibling candidates never overlap, rects have label area, conflict is symmetric") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-500, 500), s(0.1, 300);
  for (int it = 0; it < 2000; ++it) {
    const ScreenPoint p{u(rng), u(rng)};
    const LabelDims d{s(rng), s(rng)};
    for (Corner a : kCorners) {
      const Rect ra = candidate_rect(p, d, a);
      CHECK(ra.valid());
      CHECK(ra.area() == doctest::Approx(d.width * d.height).epsilon(1e-12));
      for (Corner b : kCorners) {
        if (a != b) CHECK_FALSE(rects_conflict(ra, candidate_rect(p, d, b)));
      }
    }
    const Rect r1{u(rng), u(rng), 0, 0};
    const Rect x{r1.left, r1.top, r1.left + s(rng), r1.top + s(rng)};
    const Rect y{u(rng), u(rng), 0, 0};
    const Rect z{y.left, y.top, y.left + s(rng), y.top + s(rng)};
    CHECK(rects_conflict(x, z) == rects_conflict(z, x));
  }
}

TEST_CASE("corner names and preference order") {
  CHECK(index_of(Corner::UR) == 0);
  CHECK(index_of(Corner::LL) == 3);
  for (Corner c : kCorners) CHECK(parse_corner(to_string(c)) == c);
  CHECK_FALSE(parse_corner("XX").has_value());
  CHECK(extends_right(Corner::LR));
  CHECK_FALSE(extends_right(Corner::UL));
  CHECK(extends_up(Corner::UL));
  CHECK_FALSE(extends_up(Corner::LL));
}

TEST_CASE("validation of dims and viewport") {
  CHECK_THROWS_AS(require_valid(LabelDims{0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(require_valid(LabelDims{1, -1}), std::invalid_argument);
  CHECK_THROWS_AS(require_valid(LabelDims{std::nan(""), 1}), std::invalid_argument);
  CHECK_NOTHROW(require_valid(LabelDims{1.0, 0.4}));
  CHECK_THROWS_AS(require_valid(Viewport{770, 840, {}, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(require_valid(Viewport{0, 840, {}, 1.0}), std::invalid_argument);
  CHECK_NOTHROW(require_valid(Viewport{770, 840, {}, 1.0}));
}

TEST_CASE("viewport projection round-trips") {
  const Viewport v{770, 840, {10, -20}, 2.5};
  const ScreenPoint s = v.to_screen({14, -18});
  CHECK(s == ScreenPoint{10, 5});
  CHECK(v.to_world(s) == ScreenPoint{14, -18});
}

TEST_CASE("margin is one label extent beyond the view, open") {
  const Viewport v{770, 840, {}, 1.0};
  const LabelDims d{150, 12};
  CHECK(within_margin(v, d, {-149.9, 0}));
  CHECK_FALSE(within_margin(v, d, {-150, 0}));
  CHECK(within_margin(v, d, {919.9, 851.9}));
  CHECK_FALSE(within_margin(v, d, {920, 0}));
  CHECK_FALSE(within_margin(v, d, {0, 852}));
}
