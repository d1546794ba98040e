#include "trellis/selector.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "trellis/conflict_kernel.hpp"
#include "trellis/trellis_index.hpp"

namespace trellis {

bool layouts_match(const Layout& a, const Layout& b) {
  return a.view == b.view && a.label == b.label && a.placements == b.placements &&
         a.stats.total == b.stats.total && a.stats.indexed == b.stats.indexed &&
         a.stats.margin == b.stats.margin && a.stats.culled == b.stats.culled &&
         a.stats.labeled == b.stats.labeled && a.stats.unlabeled == b.stats.unlabeled;
}

std::vector<std::uint32_t> sweep_order(std::span<const Feature> features,
                                       std::span<const std::uint32_t> subset) {
  std::vector<std::uint32_t> order(subset.begin(), subset.end());
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (features[a].priority != features[b].priority) {
      return features[a].priority > features[b].priority;
    }
    return features[a].id < features[b].id;
  });
  return order;
}

std::vector<Feature> project(std::span<const Feature> world_features, const Viewport& view) {
  std::vector<Feature> out(world_features.begin(), world_features.end());
  for (Feature& f : out) f.position = view.to_screen(f.position);
  return out;
}

namespace {

// A lower-priority neighbor with at least one live conflict.
struct Conflict {
  std::uint32_t rank;
  PairMask pairs;
  int rad;
};

// Keeps only pairs whose two candidates are both still available.
PairMask restrict_to_live(PairMask m, unsigned live_a, unsigned live_b) {
  PairMask rows = 0;
  for (std::size_t a = 0; a < 4; ++a) {
    if ((live_a >> a) & 1u) rows |= static_cast<PairMask>(live_b << (4 * a));
  }
  return m & rows;
}

}  // namespace

Layout place_labels(std::span<const Feature> features, const Viewport& view, LabelDims dims,
                    const CostConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  require_valid(dims);
  require_valid(view);
  validate(cfg);

  Layout layout;
  layout.view = view;
  layout.label = dims;
  layout.stats.total = features.size();

  std::vector<std::uint32_t> indexed;
  indexed.reserve(features.size());
  for (std::uint32_t i = 0; i < features.size(); ++i) {
    if (is_finite(features[i].position) && within_margin(view, dims, features[i].position)) {
      indexed.push_back(i);
    }
  }
  const std::vector<std::uint32_t> order = sweep_order(features, indexed);
  const std::size_t n = order.size();

  // Everything below is indexed by sweep rank.
  std::vector<Feature> ranked(n);
  for (std::size_t r = 0; r < n; ++r) {
    const Feature& f = features[order[r]];
    ranked[r].id = f.id;
    ranked[r].position = f.position;
    ranked[r].priority = f.priority;
  }
  std::vector<Trellis::Entry> identity(n);
  std::iota(identity.begin(), identity.end(), Trellis::Entry{0});
  const Trellis trellis(ranked, view, dims, MarginPolicy::include_margin, identity);
  if (trellis.indexed().size() != n) {
    throw std::logic_error("trellis and selector disagree on the indexed feature set");
  }
  const DispatchTable table(dims);

  std::vector<double> ascending(n);
  for (std::size_t r = 0; r < n; ++r) ascending[n - 1 - r] = ranked[r].priority;
  const std::vector<double> ascending_values = assign_feature_values(ascending, cfg.base_value_mode);
  std::vector<double> value(n);
  std::vector<FeatureSlots> slots(n);
  for (std::size_t r = 0; r < n; ++r) {
    value[r] = ascending_values[n - 1 - r];
    slots[r] = FeatureSlots(ranked[r].id, value[r], cfg);
  }

  std::vector<std::optional<Corner>> chosen(n);
  std::vector<Conflict> conflicts;
  std::vector<std::uint32_t> covered;
  LayoutStats& stats = layout.stats;

  for (std::uint32_t r = 0; r < n; ++r) {
    FeatureSlots& mine = slots[r];
    if (!mine.any_available()) {
      ++stats.skipped_occluded;
      continue;
    }
    const ScreenPoint here = ranked[r].position;
    const CellCoord home = trellis.cell_of_entry(r);
    const unsigned live = mine.available_mask();

    conflicts.clear();
    for (int row = home.row - kNeighborhoodRadius; row <= home.row + kNeighborhoodRadius; ++row) {
      for (Trellis::Entry e :
           trellis.row_run(row, home.col - kNeighborhoodRadius, home.col + kNeighborhoodRadius)) {
        // Higher-priority neighbors have already resolved their conflicts with us.
        if (e <= r || !slots[e].any_available()) continue;
        const CellCoord there = trellis.cell_of_entry(e);
        const KernelResult k = table.evaluate(here, ranked[e].position, offset_between(home, there));
        ++stats.pair_tests;
        stats.predicate_evaluations += k.evaluations;
        const PairMask m = restrict_to_live(k.pairs, live, slots[e].available_mask());
        if (m != 0) conflicts.push_back({e, m, rad_dist(home, there)});
      }
    }
    std::sort(conflicts.begin(), conflicts.end(),
              [](const Conflict& a, const Conflict& b) { return a.rank < b.rank; });

    std::array<double, 4> expense{};
    for (Corner c : kCorners) {
      if (!mine.available(c)) continue;
      ExpenseAccumulator acc(cfg);
      for (const Conflict& k : conflicts) {
        const unsigned hit = partners_of(k.pairs, c);
        for (Corner b : kCorners) {
          if ((hit >> index_of(b)) & 1u) acc.add_partner(slots[k.rank].value(b), k.rad);
        }
      }
      if (cfg.cover_wt != 0.0) {
        const Rect box = candidate_rect(here, dims, c);
        const CellCoord lo = trellis.cell_of({box.left, box.top});
        const CellCoord hi = trellis.cell_of({box.right, box.bottom});
        covered.clear();
        for (int row = lo.row; row <= hi.row; ++row) {
          for (Trellis::Entry e : trellis.row_run(row, lo.col, hi.col)) {
            if (e > r && box.strictly_contains(ranked[e].position)) covered.push_back(e);
          }
        }
        std::sort(covered.begin(), covered.end());
        for (std::uint32_t e : covered) acc.add_covered(value[e]);
      }
      expense[index_of(c)] = acc.total();
    }

    const Corner best = corner_at(cheapest_slot(expense, live));
    mine.select(best);
    chosen[r] = best;
    for (const Conflict& k : conflicts) {
      const unsigned hit = partners_of(k.pairs, best);
      for (Corner b : kCorners) {
        if ((hit >> index_of(b)) & 1u) slots[k.rank].occlude(b);
      }
    }
  }

  std::vector<std::uint32_t> rank_of(features.size(), 0);
  for (std::uint32_t r = 0; r < n; ++r) rank_of[order[r]] = r;
  layout.placements.reserve(n);
  for (std::uint32_t i : indexed) {
    const Feature& f = features[i];
    Placement p{f.id, f.position, f.priority, f.text, chosen[rank_of[i]], {}};
    if (p.corner) {
      p.rect = candidate_rect(f.position, dims, *p.corner);
      ++stats.labeled;
    } else {
      ++stats.unlabeled;
    }
    if (!view.contains(f.position)) ++stats.margin;
    layout.placements.push_back(std::move(p));
  }
  stats.indexed = n;
  stats.culled = features.size() - n;
  stats.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return layout;
}

std::vector<Layout> precompute_zoom_levels(std::span<const Feature> world_features,
                                           const Viewport& base, LabelDims dims, int levels,
                                           double factor, const CostConfig& cfg) {
  if (levels < 1) throw std::invalid_argument("zoom precompute needs at least one level");
  if (!(factor > 1.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("zoom factor must be greater than 1");
  }
  require_valid(dims);
  const std::vector<Feature> screen = project(world_features, base);
  std::vector<Layout> out;
  out.reserve(static_cast<std::size_t>(levels));
  for (int k = 0; k < levels; ++k) {
    const double shrink = std::pow(factor, k);
    out.push_back(place_labels(screen, base, {dims.width / shrink, dims.height / shrink}, cfg));
  }
  return out;
}

}  // namespace trellis
