#include "trellis/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <optional>

namespace trellis::oracle {

ConflictGraph brute_conflict_graph(std::span<const Feature> features, LabelDims dims) {
  ConflictGraph g;
  g.adjacency.resize(features.size() * 4);
  std::vector<std::array<Rect, 4>> rects(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    for (Corner c : kCorners) rects[i][index_of(c)] = candidate_rect(features[i].position, dims, c);
  }
  for (std::size_t i = 0; i < features.size(); ++i) {
    for (std::size_t j = i + 1; j < features.size(); ++j) {
      for (Corner a : kCorners) {
        for (Corner b : kCorners) {
          if (rects_conflict(rects[i][index_of(a)], rects[j][index_of(b)])) {
            g.adjacency[ConflictGraph::slot(i, a)].push_back(ConflictGraph::slot(j, b));
            g.adjacency[ConflictGraph::slot(j, b)].push_back(ConflictGraph::slot(i, a));
          }
        }
      }
    }
  }
  for (auto& list : g.adjacency) std::sort(list.begin(), list.end());
  return g;
}

namespace {

struct Cell {
  long row;
  long col;
};

Cell cell_for(ScreenPoint p, LabelDims dims) {
  return {static_cast<long>(std::floor(p.y / (dims.height / 2.0))),
          static_cast<long>(std::floor(p.x / (dims.width / 2.0)))};
}

int chebyshev(Cell a, Cell b) {
  return static_cast<int>(std::max(std::labs(a.row - b.row), std::labs(a.col - b.col)));
}

}  // namespace

Layout reference_selection(std::span<const Feature> features, const Viewport& view,
                           LabelDims dims, const CostConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  require_valid(dims);
  require_valid(view);
  validate(cfg);

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (is_finite(features[i].position) && within_margin(view, dims, features[i].position)) {
      kept.push_back(i);
    }
  }
  // Sweep order over the kept features; local index k refers to kept[k].
  std::vector<std::size_t> by_rank(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) by_rank[k] = k;
  std::stable_sort(by_rank.begin(), by_rank.end(), [&](std::size_t a, std::size_t b) {
    const Feature& fa = features[kept[a]];
    const Feature& fb = features[kept[b]];
    if (fa.priority != fb.priority) return fa.priority > fb.priority;
    return fa.id < fb.id;
  });
  const std::size_t n = kept.size();
  std::vector<std::size_t> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[by_rank[r]] = r;

  std::vector<Feature> local(n);
  for (std::size_t k = 0; k < n; ++k) local[k] = features[kept[k]];
  const ConflictGraph graph = brute_conflict_graph(local, dims);

  std::vector<double> ascending(n);
  for (std::size_t r = 0; r < n; ++r) ascending[n - 1 - r] = local[by_rank[r]].priority;
  const std::vector<double> ascending_values = assign_feature_values(ascending, cfg.base_value_mode);
  std::vector<double> value(n);  // by local index
  std::vector<FeatureSlots> slots(n);
  std::vector<Cell> cells(n);
  for (std::size_t k = 0; k < n; ++k) {
    value[k] = ascending_values[n - 1 - rank[k]];
    slots[k] = FeatureSlots(local[k].id, value[k], cfg);
    cells[k] = cell_for(local[k].position, dims);
  }

  struct Partner {
    std::size_t rank;
    std::size_t local;
    Corner corner;
  };
  std::vector<std::optional<Corner>> chosen(n);
  std::size_t skipped = 0;
  std::vector<Partner> partners;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t me = by_rank[r];
    if (!slots[me].any_available()) {
      ++skipped;
      continue;
    }
    std::array<double, 4> expense{};
    std::array<std::vector<Partner>, 4> live_partners;
    for (Corner c : kCorners) {
      if (!slots[me].available(c)) continue;
      partners.clear();
      for (std::uint32_t s : graph.adjacency[ConflictGraph::slot(me, c)]) {
        const std::size_t other = s / 4;
        const Corner oc = corner_at(s % 4);
        if (rank[other] > r && slots[other].available(oc)) partners.push_back({rank[other], other, oc});
      }
      std::sort(partners.begin(), partners.end(), [](const Partner& a, const Partner& b) {
        return a.rank != b.rank ? a.rank < b.rank : a.corner < b.corner;
      });
      ExpenseAccumulator acc(cfg);
      for (const Partner& p : partners) {
        acc.add_partner(slots[p.local].value(p.corner), chebyshev(cells[me], cells[p.local]));
      }
      if (cfg.cover_wt != 0.0) {
        const Rect box = candidate_rect(local[me].position, dims, c);
        for (std::size_t later = r + 1; later < n; ++later) {
          const std::size_t k = by_rank[later];
          if (box.strictly_contains(local[k].position)) acc.add_covered(value[k]);
        }
      }
      expense[index_of(c)] = acc.total();
      live_partners[index_of(c)] = partners;
    }
    std::size_t best = 4;
    for (std::size_t i = 0; i < 4; ++i) {
      if (!slots[me].available(corner_at(i))) continue;
      if (best == 4 || expense[i] < expense[best]) best = i;
    }
    slots[me].select(corner_at(best));
    chosen[me] = corner_at(best);
    for (const Partner& p : live_partners[best]) slots[p.local].occlude(p.corner);
  }

  Layout layout;
  layout.view = view;
  layout.label = dims;
  layout.stats.total = features.size();
  layout.stats.indexed = n;
  layout.stats.culled = features.size() - n;
  layout.stats.skipped_occluded = skipped;
  for (std::size_t k = 0; k < n; ++k) {
    const Feature& f = local[k];
    Placement p{f.id, f.position, f.priority, f.text, chosen[k], {}};
    if (p.corner) {
      p.rect = candidate_rect(f.position, dims, *p.corner);
      ++layout.stats.labeled;
    } else {
      ++layout.stats.unlabeled;
    }
    if (!view.contains(f.position)) ++layout.stats.margin;
    layout.placements.push_back(std::move(p));
  }
  layout.stats.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return layout;
}

}  // namespace trellis::oracle
