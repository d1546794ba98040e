#pragma once

// Brute-force references. Only candidate geometry (core_model) and the cost
// rules (cost_engine) are shared with the fast path; no trellis or dispatch
// table code is used here.

#include <span>

#include "trellis/core_model.hpp"
#include "trellis/cost_engine.hpp"
#include "trellis/selector.hpp"

namespace trellis::oracle {

// All-pairs, 16 rectangle tests per pair.
ConflictGraph brute_conflict_graph(std::span<const Feature> features, LabelDims dims);

// Same rules as place_labels on top of the brute conflict graph. Quadratic.
Layout reference_selection(std::span<const Feature> features, const Viewport& view,
                           LabelDims dims, const CostConfig& cfg = {});

}  // namespace trellis::oracle
