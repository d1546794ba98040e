#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "trellis/trellis_index.hpp"

using namespace trellis;

TEST_CASE("grid size follows the quarter-region rule") {
  const Trellis t = build_trellis({}, Viewport{1500, 1000, {}, 1.0}, LabelDims{150, 20});
  CHECK(t.n_cols() == 20);
  CHECK(t.n_rows() == 100);
  CHECK(t.cell_count() == 2000);
  CHECK(t.cell_width() == 75);
  CHECK(t.cell_height() == 10);
}

TEST_CASE("partial trailing cells are full size") {
  const Trellis t = build_trellis({}, Viewport{770, 840, {}, 1.0}, LabelDims{150, 12});
  CHECK(t.n_cols() == 11);  // ceil(770 / 75)
  CHECK(t.n_rows() == 140);
}

TEST_CASE("cell_of uses floor") {
  const std::vector<Feature> f{{0, {0, 0}, 1, ""}, {1, {100, 100}, 1, ""}, {2, {75, 6}, 1, ""},
                               {3, {-0.5, -0.5}, 1, ""}};
  const Trellis t = build_trellis(f, Viewport{770, 840, {}, 1.0}, LabelDims{150, 12});
  CHECK(t.cell_of_entry(0) == CellCoord{0, 0});
  CHECK(t.cell_of_entry(1) == CellCoord{16, 1});
  CHECK(t.cell_of_entry(2) == CellCoord{1, 1});  // boundary goes to the higher cell
  CHECK(t.cell_of_entry(3) == CellCoord{-1, -1});
}

TEST_CASE("rejects invalid dims") {
  CHECK_THROWS_AS(build_trellis({}, Viewport{770, 840, {}, 1.0}, LabelDims{0, 12}),
                  std::invalid_argument);
}

TEST_CASE("neighborhood clipping") {
  const std::vector<Feature> none;
  // 100 rows x 20 cols: view 20*75 wide, 100*6 tall.
  const Viewport v{1500, 600, {}, 1.0};
  const Trellis inner(none, v, LabelDims{150, 12}, MarginPolicy::view_only);
  CHECK(neighborhood(inner, {10, 10}).size() == 81);
  CHECK(neighborhood(inner, {0, 0}).size() == 25);
  const auto n = neighborhood(inner, {12, 8});
  CHECK(std::count(n.begin(), n.end(), CellCoord{16, 8}) == 1);
  CHECK(std::count(n.begin(), n.end(), CellCoord{17, 8}) == 0);
}

TEST_CASE("rad_dist is Chebyshev") {
  CHECK(rad_dist({3, 3}, {3, 3}) == 0);
  CHECK(rad_dist({0, 0}, {4, 2}) == 4);
  CHECK(rad_dist({0, 0}, {0, 3}) == 3);
  CHECK(rad_dist({5, 5}, {2, 7}) == 3);
}

TEST_CASE("cells_covering") {
  const std::vector<Feature> none;
  const Trellis t(none, Viewport{770, 840, {}, 1.0}, LabelDims{150, 12}, MarginPolicy::view_only);
  CHECK(cells_covering(t, Rect{75, 6, 150, 12}) == std::vector<CellCoord>{{1, 1}});
  CHECK(cells_covering(t, Rect{75, 6, 225, 18}).size() == 4);
  CHECK(cells_covering(t, Rect{80, 7, 230, 19}).size() == 9);
  CHECK(cells_covering(t, Rect{-300, -40, -200, -20}).empty());
}

TEST_CASE("population is a partition of the in-margin features") {
  std::mt19937_64 rng(11);
  const Viewport v{770, 840, {}, 1.0};
  const LabelDims d{150, 12};
  for (int it = 0; it < 20; ++it) {
    auto f = testing::uniform_features(rng, 800, 1200, 1200);
    for (auto& x : f) x.position.x -= 200, x.position.y -= 200;
    const Trellis t = build_trellis(f, v, d);
    std::size_t in_margin = 0;
    for (const auto& x : f) in_margin += within_margin(v, d, x.position);
    CHECK(t.indexed().size() == in_margin);
    std::multiset<Trellis::Entry> seen;
    for (int r = t.min_row(); r <= t.max_row(); ++r) {
      for (int c = t.min_col(); c <= t.max_col(); ++c) {
        for (Trellis::Entry e : t.cell({r, c})) {
          seen.insert(e);
          CHECK(t.cell_of_entry(e) == CellCoord{r, c});
        }
      }
    }
    CHECK(seen.size() == in_margin);
    CHECK(std::set<Trellis::Entry>(seen.begin(), seen.end()).size() == in_margin);
  }
}

TEST_CASE("per-cell lists are in descending priority, ids ascending on ties") {
  std::vector<Feature> f;
  for (int i = 0; i < 6; ++i) f.push_back({10 - i, {10, 3}, double(i % 3), ""});
  const Trellis t = build_trellis(f, Viewport{770, 840, {}, 1.0}, LabelDims{150, 12});
  const auto c = t.cell({0, 0});
  REQUIRE(c.size() == 6);
  for (std::size_t i = 1; i < c.size(); ++i) {
    const Feature& a = f[c[i - 1]];
    const Feature& b = f[c[i]];
    CHECK((a.priority > b.priority || (a.priority == b.priority && a.id < b.id)));
  }
}

TEST_CASE("row_run concatenates a row of cells") {
  std::mt19937_64 rng(5);
  const auto f = testing::uniform_features(rng, 300, 770, 840);
  const Trellis t = build_trellis(f, Viewport{770, 840, {}, 1.0}, LabelDims{150, 12});
  for (int r = 0; r < 20; ++r) {
    std::vector<Trellis::Entry> want;
    for (int c = 2; c <= 6; ++c) {
      const auto cell = t.cell({r, c});
      want.insert(want.end(), cell.begin(), cell.end());
    }
    const auto got = t.row_run(r, 2, 6);
    CHECK(std::vector<Trellis::Entry>(got.begin(), got.end()) == want);
  }
}

TEST_CASE("dense and sparse storage agree") {
  std::mt19937_64 rng(9);
  const auto f = testing::uniform_features(rng, 500, 770, 840);
  const Viewport v{770, 840, {}, 1.0};
  const Trellis dense = build_trellis(f, v, LabelDims{150, 12});
  const Trellis sparse = build_trellis(f, v, LabelDims{1.0, 0.4});
  CHECK(dense.dense());
  CHECK_FALSE(sparse.dense());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto e = static_cast<Trellis::Entry>(i);
    const auto cell = sparse.cell(sparse.cell_of_entry(e));
    CHECK(std::find(cell.begin(), cell.end(), e) != cell.end());
  }
}

TEST_CASE("completeness: conflicting features lie in each other's neighborhood") {
  std::mt19937_64 rng(3);
  const LabelDims d{150, 12};
  const Viewport v{770, 840, {}, 1.0};
  for (int it = 0; it < 10; ++it) {
    const auto f = testing::clustered_features(rng, 400, 770, 840, 8, 40);
    const Trellis t = build_trellis(f, v, d);
    for (std::size_t a = 0; a < f.size(); ++a) {
      for (std::size_t b = a + 1; b < f.size(); ++b) {
        if (!t.is_indexed(a) || !t.is_indexed(b)) continue;
        bool conflict = false;
        for (Corner ca : kCorners) {
          for (Corner cb : kCorners) {
            conflict |= rects_conflict(candidate_rect(f[a].position, d, ca),
                                       candidate_rect(f[b].position, d, cb));
          }
        }
        if (!conflict) continue;
        const CellOffset off = offset_between(t.cell_of_entry(a), t.cell_of_entry(b));
        CHECK(std::abs(off.d_col) <= 4);
        CHECK(std::abs(off.d_row) <= 4);
      }
    }
  }
}
