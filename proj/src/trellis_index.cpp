#include "trellis/trellis_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace trellis {

int rad_dist(CellCoord a, CellCoord b) {
  return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col));
}

namespace {

int floor_to_int(double v) {
  const double f = std::floor(v);
  if (f < std::numeric_limits<int>::min() / 2 || f > std::numeric_limits<int>::max() / 2) {
    throw std::out_of_range("coordinate too large for the trellis grid");
  }
  return static_cast<int>(f);
}

std::vector<Trellis::Entry> processing_order(std::span<const Feature> features) {
  std::vector<Trellis::Entry> order(features.size());
  std::iota(order.begin(), order.end(), Trellis::Entry{0});
  std::sort(order.begin(), order.end(), [&](Trellis::Entry a, Trellis::Entry b) {
    const Feature& fa = features[a];
    const Feature& fb = features[b];
    if (fa.priority != fb.priority) return fa.priority > fb.priority;
    return fa.id < fb.id;
  });
  return order;
}

}  // namespace

Trellis::Trellis(std::span<const Feature> features, const Viewport& view, LabelDims dims,
                 MarginPolicy margin, std::span<const Entry> order)
    : cell_width_(dims.width / 2.0), cell_height_(dims.height / 2.0) {
  require_valid(dims);
  require_valid(view);
  if (features.size() >= std::numeric_limits<Entry>::max()) {
    throw std::length_error("too many features for one trellis");
  }

  n_cols_ = static_cast<int>(std::ceil(view.width / cell_width_));
  n_rows_ = static_cast<int>(std::ceil(view.height / cell_height_));
  if (margin == MarginPolicy::include_margin) {
    min_col_ = floor_to_int(-dims.width / cell_width_);
    min_row_ = floor_to_int(-dims.height / cell_height_);
    max_col_ = floor_to_int((view.width + dims.width) / cell_width_);
    max_row_ = floor_to_int((view.height + dims.height) / cell_height_);
  } else {
    min_col_ = 0;
    min_row_ = 0;
    max_col_ = n_cols_ - 1;
    max_row_ = n_rows_ - 1;
  }
  stride_ = static_cast<std::uint64_t>(max_col_ - min_col_ + 1);
  const std::uint64_t rows = static_cast<std::uint64_t>(max_row_ - min_row_ + 1);
  const std::uint64_t total_cells = stride_ * rows;

  entry_cells_.resize(features.size());
  entry_cells_valid_.assign(features.size(), 0);
  for (Entry e = 0; e < features.size(); ++e) {
    const ScreenPoint p = features[e].position;
    if (!is_finite(p)) continue;
    const bool inside = margin == MarginPolicy::include_margin ? within_margin(view, dims, p)
                                                               : view.contains(p);
    if (!inside) continue;
    const CellCoord c = cell_of(p);
    if (!in_grid(c)) continue;
    entry_cells_[e] = c;
    entry_cells_valid_[e] = 1;
    indexed_.push_back(e);
  }

  std::vector<Entry> computed;
  if (order.empty()) {
    computed = processing_order(features);
    order = computed;
  }

  sorted_.reserve(indexed_.size());
  const std::uint64_t dense_limit = 4 * static_cast<std::uint64_t>(indexed_.size()) + 65536;
  if (total_cells <= dense_limit) {
    offsets_.assign(total_cells + 1, 0);
    for (Entry e : indexed_) {
      ++offsets_[key_of(entry_cells_[e].row, entry_cells_[e].col) + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
    sorted_.resize(indexed_.size());
    for (Entry e : order) {
      if (!entry_cells_valid_[e]) continue;
      sorted_[cursor[key_of(entry_cells_[e].row, entry_cells_[e].col)]++] = e;
    }
  } else {
    std::vector<std::pair<std::uint64_t, Entry>> keyed;
    keyed.reserve(indexed_.size());
    for (Entry e : order) {
      if (!entry_cells_valid_[e]) continue;
      keyed.emplace_back(key_of(entry_cells_[e].row, entry_cells_[e].col), e);
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    keys_.reserve(keyed.size());
    for (const auto& [k, e] : keyed) {
      keys_.push_back(k);
      sorted_.push_back(e);
    }
    if (rows <= dense_limit) {
      row_starts_.assign(rows + 1, 0);
      for (std::uint64_t k : keys_) ++row_starts_[k / stride_ + 1];
      std::partial_sum(row_starts_.begin(), row_starts_.end(), row_starts_.begin());
    }
  }
}

CellCoord Trellis::cell_of(ScreenPoint p) const {
  return {floor_to_int(p.y / cell_height_), floor_to_int(p.x / cell_width_)};
}

std::size_t Trellis::lower_entry(std::uint64_t key, std::size_t lo, std::size_t hi) const {
  return static_cast<std::size_t>(
      std::lower_bound(keys_.begin() + static_cast<std::ptrdiff_t>(lo),
                       keys_.begin() + static_cast<std::ptrdiff_t>(hi), key) -
      keys_.begin());
}

std::span<const Trellis::Entry> Trellis::cell(CellCoord c) const {
  return row_run(c.row, c.col, c.col);
}

std::span<const Trellis::Entry> Trellis::row_run(int row, int col_lo, int col_hi) const {
  if (row < min_row_ || row > max_row_) return {};
  col_lo = std::max(col_lo, min_col_);
  col_hi = std::min(col_hi, max_col_);
  if (col_lo > col_hi) return {};
  const std::uint64_t first = key_of(row, col_lo);
  const std::uint64_t last = key_of(row, col_hi) + 1;
  std::size_t begin = 0;
  std::size_t end = 0;
  if (dense()) {
    begin = offsets_[first];
    end = offsets_[last];
  } else if (!row_starts_.empty()) {
    const auto r = static_cast<std::size_t>(row - min_row_);
    const std::size_t lo = row_starts_[r];
    const std::size_t hi = row_starts_[r + 1];
    if (lo == hi) return {};
    begin = lower_entry(first, lo, hi);
    end = lower_entry(last, begin, hi);
  } else {
    begin = lower_entry(first, 0, keys_.size());
    end = lower_entry(last, begin, keys_.size());
  }
  return std::span<const Entry>(sorted_).subspan(begin, end - begin);
}

Trellis build_trellis(std::span<const Feature> features, const Viewport& view, LabelDims dims) {
  return Trellis(features, view, dims);
}

std::vector<CellCoord> neighborhood(const Trellis& t, CellCoord c) {
  std::vector<CellCoord> out;
  out.reserve(81);
  for (int dr = -kNeighborhoodRadius; dr <= kNeighborhoodRadius; ++dr) {
    for (int dc = -kNeighborhoodRadius; dc <= kNeighborhoodRadius; ++dc) {
      const CellCoord n{c.row + dr, c.col + dc};
      if (t.in_grid(n)) out.push_back(n);
    }
  }
  return out;
}

std::vector<CellCoord> cells_covering(const Trellis& t, const Rect& r) {
  std::vector<CellCoord> out;
  if (!r.valid()) return out;
  const int col_lo = std::max(t.min_col(), floor_to_int(r.left / t.cell_width()));
  const int col_hi =
      std::min(t.max_col(), static_cast<int>(std::ceil(r.right / t.cell_width())) - 1);
  const int row_lo = std::max(t.min_row(), floor_to_int(r.top / t.cell_height()));
  const int row_hi =
      std::min(t.max_row(), static_cast<int>(std::ceil(r.bottom / t.cell_height())) - 1);
  for (int row = row_lo; row <= row_hi; ++row) {
    for (int col = col_lo; col <= col_hi; ++col) out.push_back({row, col});
  }
  return out;
}

}  // namespace trellis
