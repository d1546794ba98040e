#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "trellis/conflict_kernel.hpp"
#include "trellis/oracle.hpp"
#include "trellis/trellis_index.hpp"

using namespace trellis;

namespace {

const LabelDims kDims{150, 12};

CellCoord cell(ScreenPoint p, LabelDims d) {
  return {static_cast<int>(std::floor(p.y / (d.height / 2))),
          static_cast<int>(std::floor(p.x / (d.width / 2)))};
}

PairMask kernel(const DispatchTable& t, ScreenPoint a, ScreenPoint b) {
  return t.evaluate(a, b, offset_between(cell(a, t.dims()), cell(b, t.dims()))).pairs;
}

PairMask same_corner_pairs() {
  PairMask m = 0;
  for (Corner c : kCorners) m |= pair_bit(c, c);
  return m;
}

}  // namespace

TEST_CASE("coincident features conflict on same corners only") {
  const DispatchTable t(kDims);
  CHECK(brute_pairs({300, 300}, {300, 300}, kDims) == same_corner_pairs());
  CHECK(kernel(t, {300, 300}, {300, 300}) == same_corner_pairs());
  CHECK(kernel(t, {310.5, 301.25}, {310.5, 301.25}) == same_corner_pairs());
}

TEST_CASE("offset (-4, 0) resolves four candidate pairs with two predicates") {
  const DispatchTable t(kDims);
  const PairTestProgram& p = t.program({-4, 0});
  CHECK(p.predicate_count() == 2);
  CHECK(p.x.active);
  CHECK(p.x.threshold == -300);
  CHECK(p.y.threshold == 0);
  const PairMask c = p.candidates();
  CHECK(pairs_of(c).size() == 4);
  for (auto [a, b] : pairs_of(c)) {
    CHECK_FALSE(extends_right(a));  // A's left-extending candidates
    CHECK(extends_right(b));        // meet B's right-extending ones
  }
}

TEST_CASE("labels two widths apart share only an edge") {
  const DispatchTable t(kDims);
  CHECK(kernel(t, {400, 300}, {700, 300}) == 0);
  CHECK(kernel(t, {400, 300}, {100, 300}) == 0);
  CHECK(kernel(t, {400, 300}, {400, 324}) == 0);
  CHECK(kernel(t, {400, 300}, {400, 276}) == 0);
}

TEST_CASE("one and a half widths to the left gives horizontally adjacent pairs") {
  const DispatchTable t(kDims);
  const ScreenPoint a{400, 300}, b{400 - 225, 300};
  const PairMask got = kernel(t, a, b);
  const PairMask want = pair_bit(Corner::UL, Corner::UR) | pair_bit(Corner::LL, Corner::LR);
  CHECK(got == want);
  CHECK(got == brute_pairs(a, b, kDims));
}

TEST_CASE("far displacements yield no pairs") {
  const DispatchTable t(kDims);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 2000; ++i) {
    const ScreenPoint a{400 + 75 * u(rng), 300 + 6 * u(rng)};
    const ScreenPoint b{a.x + (i % 2 ? 1 : -1) * (300 + 200 * u(rng)), a.y + 50 * (u(rng) - 0.5)};
    CHECK(kernel(t, a, b) == 0);
    CHECK(t.evaluate(a, b, {5, 0}).pairs == 0);
  }
}

TEST_CASE("every program uses at most two predicates; total over the neighborhood is 90") {
  const DispatchTable t(kDims);
  int total = 0, centre = 0;
  for (int r = -4; r <= 4; ++r) {
    for (int c = -4; c <= 4; ++c) {
      const int k = t.program({c, r}).predicate_count();
      CHECK(k <= 2);
      total += k;
      if (r == 0 && c == 0) centre = k;
    }
  }
  CHECK(total == 90);
  CHECK(total - centre == 88);
  CHECK(t.program({1, 1}).predicate_count() == 0);
  CHECK(t.program({4, 4}).predicate_count() == 2);
}

TEST_CASE("table structure does not depend on label dims") {
  const DispatchTable a(kDims), b(LabelDims{1.0, 0.4});
  for (int r = -4; r <= 4; ++r) {
    for (int c = -4; c <= 4; ++c) {
      const auto& pa = a.program({c, r});
      const auto& pb = b.program({c, r});
      CHECK(pa.pairs == pb.pairs);
      CHECK(pa.x.cell_multiple == pb.x.cell_multiple);
      CHECK(pa.y.cell_multiple == pb.y.cell_multiple);
    }
  }
}

TEST_CASE("kernel matches brute force on random sub-cell placements, with symmetry") {
  for (LabelDims d : {kDims, LabelDims{1.0, 0.4}, LabelDims{16, 4}}) {
    const DispatchTable t(d);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0, 1);
    const double cw = d.width / 2, ch = d.height / 2;
    std::size_t mismatches = 0, asym = 0;
    for (int r = -4; r <= 4; ++r) {
      for (int c = -4; c <= 4; ++c) {
        for (int i = 0; i < 200; ++i) {
          const ScreenPoint a{(20 + u(rng)) * cw, (20 + u(rng)) * ch};
          const ScreenPoint b{(20 + c + u(rng)) * cw, (20 + r + u(rng)) * ch};
          const PairMask ab = kernel(t, a, b);
          mismatches += ab != brute_pairs(a, b, d);
          asym += kernel(t, b, a) != transpose(ab);
        }
      }
    }
    CHECK(mismatches == 0);
    CHECK(asym == 0);
  }
}

TEST_CASE("transpose and pair helpers") {
  const PairMask m = pair_bit(Corner::UR, Corner::LL) | pair_bit(Corner::LR, Corner::LR);
  CHECK(transpose(m) == (pair_bit(Corner::LL, Corner::UR) | pair_bit(Corner::LR, Corner::LR)));
  CHECK(transpose(transpose(m)) == m);
  CHECK(partners_of(m, Corner::UR) == 0b1000u);
  CHECK(has_pair(m, Corner::LR, Corner::LR));
  CHECK_FALSE(has_pair(m, Corner::LL, Corner::UR));
  CHECK(pairs_of(m).size() == 2);
}

TEST_CASE("trellis conflict graph equals brute force") {
  std::mt19937_64 rng(17);
  const Viewport v{770, 840, {}, 1.0};
  for (int it = 0; it < 10; ++it) {
    const auto f = it % 2 ? testing::uniform_features(rng, 500, 770, 840)
                          : testing::clustered_features(rng, 500, 770, 840, 10, 50);
    std::vector<Feature> inside;
    for (const auto& x : f) {
      if (within_margin(v, kDims, x.position)) inside.push_back(x);
    }
    const ConflictGraph g = trellis_conflict_graph(inside, v, kDims);
    CHECK(g == oracle::brute_conflict_graph(inside, kDims));
  }
}

TEST_CASE("dump lists every offset") {
  const std::string s = DispatchTable(kDims).dump();
  CHECK(s.find("d_col=-4 d_row=-4") != std::string::npos);
  CHECK(s.find("d_col=4 d_row=4") != std::string::npos);
}
