#pragma once

// Exact candidate-pair conflicts from a cell offset plus at most two scalar
// comparisons, with no rectangle intersection tests.
//
// With quarter-region cells, the horizontal displacement between two
// features in cells d_col apart lies strictly inside
// ((d_col - 1) * cw, (d_col + 1) * cw). Candidate x-intervals can only change
// overlap status where the displacement crosses 0, +-w or +-2w, i.e. even
// multiples of the cell width. An odd offset therefore fixes every x-overlap
// outright and an even offset leaves exactly one threshold to compare
// against. The same holds vertically.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trellis/core_model.hpp"
#include "trellis/trellis_index.hpp"

namespace trellis {

// Bit 4*a + b is set when candidate a of the first feature overlaps
// candidate b of the second.
using PairMask = std::uint16_t;

constexpr PairMask pair_bit(Corner a, Corner b) {
  return static_cast<PairMask>(1u << (4 * index_of(a) + index_of(b)));
}
constexpr bool has_pair(PairMask m, Corner a, Corner b) { return (m & pair_bit(a, b)) != 0; }
// Corners of the second feature that conflict with corner a of the first (4-bit mask).
constexpr unsigned partners_of(PairMask m, Corner a) { return (m >> (4 * index_of(a))) & 0xFu; }
// The same relation seen from the other feature.
PairMask transpose(PairMask m);
std::vector<std::pair<Corner, Corner>> pairs_of(PairMask m);
std::string describe(PairMask m);

// Brute-force pair set from sixteen rectangle tests.
PairMask brute_pairs(ScreenPoint a, ScreenPoint b, LabelDims dims);

// Result of a three-way comparison of a displacement against a threshold.
enum class Outcome : std::uint8_t { below = 0, equal = 1, above = 2 };

struct AxisTest {
  bool active = false;
  int cell_multiple = 0;  // threshold in cells: one of 0, +-2, +-4
  double threshold = 0.0; // pixels: 0, +-w or +-2w (resp. h)
};

struct PairTestProgram {
  AxisTest x;  // compares dx = b.x - a.x
  AxisTest y;  // compares dy = b.y - a.y
  std::array<std::array<PairMask, 3>, 3> pairs{};  // [x outcome][y outcome]

  int predicate_count() const { return int{x.active} + int{y.active}; }
  // Union over outcomes: every pair that can occur at this offset.
  PairMask candidates() const;
};

struct KernelResult {
  PairMask pairs = 0;
  std::uint8_t evaluations = 0;
};

class DispatchTable {
 public:
  explicit DispatchTable(LabelDims dims);

  LabelDims dims() const { return dims_; }
  const PairTestProgram& program(CellOffset off) const {
    return programs_[static_cast<std::size_t>(off.d_row + kNeighborhoodRadius) * 9 +
                     static_cast<std::size_t>(off.d_col + kNeighborhoodRadius)];
  }

  // Offsets outside the 9x9 neighborhood yield no pairs.
  KernelResult evaluate(ScreenPoint a, ScreenPoint b, CellOffset off) const {
    if (off.d_col < -kNeighborhoodRadius || off.d_col > kNeighborhoodRadius ||
        off.d_row < -kNeighborhoodRadius || off.d_row > kNeighborhoodRadius) {
      return {};
    }
    const PairTestProgram& p = program(off);
    std::size_t ox = 0;
    std::size_t oy = 0;
    if (p.x.active) ox = static_cast<std::size_t>(compare(b.x - a.x, p.x.threshold));
    if (p.y.active) oy = static_cast<std::size_t>(compare(b.y - a.y, p.y.threshold));
    return {p.pairs[ox][oy], static_cast<std::uint8_t>(p.predicate_count())};
  }

  // Human-readable listing of all 81 programs.
  std::string dump() const;

 private:
  static Outcome compare(double d, double threshold) {
    return d < threshold ? Outcome::below : (d > threshold ? Outcome::above : Outcome::equal);
  }

  LabelDims dims_;
  std::array<PairTestProgram, 81> programs_{};
};

DispatchTable build_dispatch_table(LabelDims dims);

// Conflicting candidate pairs of a and b, where off = CELL(b) - CELL(a).
inline PairMask conflict_pairs(const DispatchTable& table, const Feature& a, const Feature& b,
                               CellOffset off) {
  return table.evaluate(a.position, b.position, off).pairs;
}

// Conflict graph of the indexed features via trellis neighborhoods and the
// dispatch table. Slots refer to indices into `features`; features outside
// the view margin have empty adjacency.
ConflictGraph trellis_conflict_graph(std::span<const Feature> features, const Viewport& view,
                                     LabelDims dims);

}  // namespace trellis
