#pragma once

// The trellis: a flat grid of quarter-region cells (half a label wide, half a
// label tall) over the viewport. Any two features whose candidates overlap
// lie within four rows and four columns of each other.

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "trellis/core_model.hpp"

namespace trellis {

// Cell coordinates are relative to the viewport origin. Cells that only
// cover the off-screen margin have negative indices or indices past
// n_rows() / n_cols().
struct CellCoord {
  int row = 0;
  int col = 0;

  auto operator<=>(const CellCoord&) const = default;
};

struct CellOffset {
  int d_col = 0;
  int d_row = 0;

  bool operator==(const CellOffset&) const = default;
};

inline constexpr int kNeighborhoodRadius = 4;

inline CellOffset offset_between(CellCoord from, CellCoord to) {
  return {to.col - from.col, to.row - from.row};
}

// Chebyshev distance in cells; meaningful inside the 9x9 neighborhood.
int rad_dist(CellCoord a, CellCoord b);

enum class MarginPolicy { include_margin, view_only };

class Trellis {
 public:
  using Entry = std::uint32_t;  // index into the feature span given at build time

  // `order`, when non-empty, lists feature indices in processing order
  // (descending priority); per-cell lists follow it. When empty, the order is
  // computed from the features (priority descending, id ascending).
  Trellis(std::span<const Feature> features, const Viewport& view, LabelDims dims,
          MarginPolicy margin = MarginPolicy::include_margin,
          std::span<const Entry> order = {});

  double cell_width() const { return cell_width_; }
  double cell_height() const { return cell_height_; }

  // Cells covering the viewport itself.
  int n_cols() const { return n_cols_; }
  int n_rows() const { return n_rows_; }
  std::size_t cell_count() const { return static_cast<std::size_t>(n_cols_) * n_rows_; }

  // Full storage extent, margin cells included (inclusive bounds).
  int min_row() const { return min_row_; }
  int max_row() const { return max_row_; }
  int min_col() const { return min_col_; }
  int max_col() const { return max_col_; }
  bool in_grid(CellCoord c) const {
    return c.row >= min_row_ && c.row <= max_row_ && c.col >= min_col_ && c.col <= max_col_;
  }

  CellCoord cell_of(ScreenPoint p) const;
  CellCoord cell_of_entry(Entry e) const { return entry_cells_[e]; }

  // Indexed features (inside the view or its margin), in input order.
  std::span<const Entry> indexed() const { return indexed_; }
  bool is_indexed(Entry e) const { return entry_cells_valid_[e] != 0; }

  std::span<const Entry> cell(CellCoord c) const;
  // Entries of cells (row, col_lo..col_hi), contiguous in storage; the range
  // is clipped to the grid.
  std::span<const Entry> row_run(int row, int col_lo, int col_hi) const;

  // True when the per-cell offset table is stored densely.
  bool dense() const { return !offsets_.empty(); }

 private:
  std::uint64_t key_of(int row, int col) const {
    return static_cast<std::uint64_t>(row - min_row_) * stride_ +
           static_cast<std::uint64_t>(col - min_col_);
  }
  std::size_t lower_entry(std::uint64_t key, std::size_t lo, std::size_t hi) const;

  double cell_width_;
  double cell_height_;
  int n_cols_ = 0;
  int n_rows_ = 0;
  int min_row_ = 0, max_row_ = -1, min_col_ = 0, max_col_ = -1;
  std::uint64_t stride_ = 0;

  std::vector<CellCoord> entry_cells_;
  std::vector<std::uint8_t> entry_cells_valid_;
  std::vector<Entry> indexed_;

  std::vector<Entry> sorted_;          // entries grouped by cell key
  std::vector<std::uint64_t> keys_;    // sparse mode: key of each sorted entry
  std::vector<std::uint32_t> offsets_; // dense mode: start of each cell in sorted_
  std::vector<std::uint32_t> row_starts_;  // sparse mode: start of each row in keys_
};

Trellis build_trellis(std::span<const Feature> features, const Viewport& view, LabelDims dims);

// All grid cells within radius 4 of c, clipped to the grid; at most 81.
std::vector<CellCoord> neighborhood(const Trellis& t, CellCoord c);

// Every grid cell whose area meets the interior of r.
std::vector<CellCoord> cells_covering(const Trellis& t, const Rect& r);

}  // namespace trellis
