#include <doctest.h>

#include <stdexcept>

#include <random>

#include "fixtures.hpp"
#include "trellis/oracle.hpp"

using namespace trellis;

namespace {
const Viewport kView{770, 840, {}, 1.0};
const LabelDims kDims{150, 12};
}  // namespace

TEST_CASE("brute conflict graph basics") {
  CHECK(oracle::brute_conflict_graph({}, kDims).edge_count() == 0);
  const std::vector<Feature> two{{1, {5, 5}, 1, ""}, {2, {5, 5}, 2, ""}};
  const ConflictGraph g = oracle::brute_conflict_graph(two, kDims);
  CHECK(g.edge_count() == 4);
  for (Corner c : kCorners) {
    CHECK(g.adjacency[ConflictGraph::slot(0, c)] ==
          std::vector<std::uint32_t>{ConflictGraph::slot(1, c)});
  }
}

TEST_CASE("brute graph is symmetric without self or sibling edges") {
  std::mt19937_64 rng(21);
  const auto f = testing::clustered_features(rng, 300, 770, 840, 5, 40);
  const ConflictGraph g = oracle::brute_conflict_graph(f, kDims);
  for (std::uint32_t s = 0; s < g.adjacency.size(); ++s) {
    for (std::uint32_t t : g.adjacency[s]) {
      CHECK(t / 4 != s / 4);
      const auto& back = g.adjacency[t];
      CHECK(std::find(back.begin(), back.end(), s) != back.end());
    }
  }
}

TEST_CASE("reference selection on small instances") {
  const std::vector<Feature> one{{1, {10, 10}, 1, ""}};
  CHECK(oracle::reference_selection(one, kView, kDims).placements[0].corner == Corner::UR);
  const std::vector<Feature> two{{1, {300, 300}, 1, ""}, {2, {300, 300}, 2, ""}};
  const Layout l = oracle::reference_selection(two, kView, kDims);
  CHECK(l.placements[0].corner == Corner::UR);
  CHECK(l.placements[1].corner == Corner::LL);
}

TEST_CASE("reference selection equals place_labels") {
  std::mt19937_64 rng(31);
  CostConfig cover;
  cover.cover_wt = 0.25;
  for (int it = 0; it < 40; ++it) {
    const std::size_t n = 1 + rng() % 400;
    const auto f = it % 2 ? testing::uniform_features(rng, n, 900, 1000)
                          : testing::grid_aligned_features(rng, n, kDims, 14, 150);
    const CostConfig& cfg = it % 4 < 2 ? CostConfig{} : cover;
    const Layout a = place_labels(f, kView, kDims, cfg);
    const Layout b = oracle::reference_selection(f, kView, kDims, cfg);
    CHECK(layouts_match(a, b));
  }
}
