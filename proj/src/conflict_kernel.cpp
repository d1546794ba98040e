#include "trellis/conflict_kernel.hpp"

#include <algorithm>
#include <sstream>

namespace trellis {

PairMask transpose(PairMask m) {
  PairMask out = 0;
  for (Corner a : kCorners) {
    for (Corner b : kCorners) {
      if (has_pair(m, a, b)) out |= pair_bit(b, a);
    }
  }
  return out;
}

std::vector<std::pair<Corner, Corner>> pairs_of(PairMask m) {
  std::vector<std::pair<Corner, Corner>> out;
  for (Corner a : kCorners) {
    for (Corner b : kCorners) {
      if (has_pair(m, a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

std::string describe(PairMask m) {
  std::string s = "{";
  bool first = true;
  for (const auto& [a, b] : pairs_of(m)) {
    if (!first) s += ", ";
    first = false;
    s += "A.";
    s += to_string(a);
    s += ":B.";
    s += to_string(b);
  }
  s += "}";
  return s;
}

PairMask brute_pairs(ScreenPoint a, ScreenPoint b, LabelDims dims) {
  PairMask m = 0;
  for (Corner ca : kCorners) {
    const Rect ra = candidate_rect(a, dims, ca);
    for (Corner cb : kCorners) {
      if (rects_conflict(ra, candidate_rect(b, dims, cb))) m |= pair_bit(ca, cb);
    }
  }
  return m;
}

PairMask PairTestProgram::candidates() const {
  PairMask m = 0;
  for (const auto& row : pairs) {
    for (PairMask p : row) m |= p;
  }
  return m;
}

namespace {

// Geometry in cell units: cells are 1x1 and labels 2x2.
constexpr LabelDims kUnitLabel{2.0, 2.0};

struct AxisSamples {
  bool active = false;
  std::array<double, 3> at{};  // representative displacement per outcome
};

AxisSamples samples_for(int offset) {
  AxisSamples s;
  if (offset % 2 == 0) {
    s.active = true;
    s.at = {offset - 0.5, static_cast<double>(offset), offset + 0.5};
  } else {
    s.at.fill(static_cast<double>(offset));
  }
  return s;
}

PairTestProgram derive_program(int d_col, int d_row, LabelDims dims) {
  const AxisSamples xs = samples_for(d_col);
  const AxisSamples ys = samples_for(d_row);

  PairTestProgram p;
  for (std::size_t ox = 0; ox < 3; ++ox) {
    for (std::size_t oy = 0; oy < 3; ++oy) {
      p.pairs[ox][oy] = brute_pairs({0.0, 0.0}, {xs.at[ox], ys.at[oy]}, kUnitLabel);
    }
  }

  p.x.active = xs.active;
  p.y.active = ys.active;
  // Drop a comparison whose outcome never changes the pair set.
  if (p.x.active &&
      std::all_of(p.pairs.begin(), p.pairs.end(), [&](const auto& row) { return row == p.pairs[0]; })) {
    p.x.active = false;
  }
  if (p.y.active && std::all_of(p.pairs.begin(), p.pairs.end(), [](const auto& row) {
        return row[0] == row[1] && row[1] == row[2];
      })) {
    p.y.active = false;
  }
  // Inactive axes always read outcome index 0.
  if (!p.x.active) {
    for (std::size_t ox = 1; ox < 3; ++ox) p.pairs[ox] = p.pairs[0];
  }
  if (!p.y.active) {
    for (auto& row : p.pairs) row[1] = row[2] = row[0];
  }

  if (p.x.active) {
    p.x.cell_multiple = d_col;
    p.x.threshold = (d_col / 2) * dims.width;
  }
  if (p.y.active) {
    p.y.cell_multiple = d_row;
    p.y.threshold = (d_row / 2) * dims.height;
  }
  return p;
}

}  // namespace

DispatchTable::DispatchTable(LabelDims dims) : dims_(dims) {
  require_valid(dims);
  for (int d_row = -kNeighborhoodRadius; d_row <= kNeighborhoodRadius; ++d_row) {
    for (int d_col = -kNeighborhoodRadius; d_col <= kNeighborhoodRadius; ++d_col) {
      programs_[static_cast<std::size_t>(d_row + kNeighborhoodRadius) * 9 +
                static_cast<std::size_t>(d_col + kNeighborhoodRadius)] =
          derive_program(d_col, d_row, dims);
    }
  }
}

std::string DispatchTable::dump() const {
  static constexpr const char* kOutcome[3] = {"<", "=", ">"};
  std::ostringstream out;
  out << "dispatch table for label " << dims_.width << "x" << dims_.height << " (cell "
      << dims_.width / 2 << "x" << dims_.height / 2 << ")\n";
  int total_tests = 0;
  for (int d_row = -kNeighborhoodRadius; d_row <= kNeighborhoodRadius; ++d_row) {
    for (int d_col = -kNeighborhoodRadius; d_col <= kNeighborhoodRadius; ++d_col) {
      const PairTestProgram& p = program({d_col, d_row});
      total_tests += p.predicate_count();
      out << "offset d_col=" << d_col << " d_row=" << d_row << " tests=" << p.predicate_count();
      if (p.x.active) out << "  [dx vs " << p.x.threshold << "]";
      if (p.y.active) out << "  [dy vs " << p.y.threshold << "]";
      out << "\n";
      const std::size_t nx = p.x.active ? 3 : 1;
      const std::size_t ny = p.y.active ? 3 : 1;
      for (std::size_t ox = 0; ox < nx; ++ox) {
        for (std::size_t oy = 0; oy < ny; ++oy) {
          out << "   ";
          if (p.x.active) out << " dx" << kOutcome[ox] << p.x.threshold;
          if (p.y.active) out << " dy" << kOutcome[oy] << p.y.threshold;
          if (!p.x.active && !p.y.active) out << " always";
          out << " -> " << describe(p.pairs[ox][oy]) << "\n";
        }
      }
    }
  }
  out << "total tests over the neighborhood: " << total_tests << "\n";
  return out.str();
}

DispatchTable build_dispatch_table(LabelDims dims) { return DispatchTable(dims); }

ConflictGraph trellis_conflict_graph(std::span<const Feature> features, const Viewport& view,
                                     LabelDims dims) {
  const Trellis trellis(features, view, dims);
  const DispatchTable table(dims);
  ConflictGraph g;
  g.adjacency.resize(features.size() * 4);
  for (Trellis::Entry a : trellis.indexed()) {
    const CellCoord ca = trellis.cell_of_entry(a);
    for (int row = ca.row - kNeighborhoodRadius; row <= ca.row + kNeighborhoodRadius; ++row) {
      for (Trellis::Entry b :
           trellis.row_run(row, ca.col - kNeighborhoodRadius, ca.col + kNeighborhoodRadius)) {
        if (b == a) continue;
        const CellOffset off = offset_between(ca, trellis.cell_of_entry(b));
        const PairMask m = table.evaluate(features[a].position, features[b].position, off).pairs;
        for (Corner x : kCorners) {
          for (Corner y : kCorners) {
            if (has_pair(m, x, y)) {
              g.adjacency[ConflictGraph::slot(a, x)].push_back(ConflictGraph::slot(b, y));
            }
          }
        }
      }
    }
  }
  for (auto& list : g.adjacency) std::sort(list.begin(), list.end());
  return g;
}

}  // namespace trellis
