#pragma once

// Candidate values and selection expense.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trellis/core_model.hpp"

namespace trellis {

enum class BaseValueMode { rank_spread, raw_priority };

std::string_view to_string(BaseValueMode m);

struct CostConfig {
  double prox_wt = 0.5;
  std::array<double, 4> preference_multipliers{1.0, 0.95, 0.90, 0.85};  // UR, LR, UL, LL
  double cover_wt = 0.0;
  BaseValueMode base_value_mode = BaseValueMode::rank_spread;

  double multiplier(Corner c) const { return preference_multipliers[index_of(c)]; }
  bool operator==(const CostConfig&) const = default;
};

// Throws std::invalid_argument when multipliers are not strictly decreasing,
// prox_wt <= 0 or cover_wt < 0.
void validate(const CostConfig& cfg);

// Flat `key = value` (or `key: value`) lines; '#' starts a comment. Keys:
// prox_wt, mult_ur, mult_lr, mult_ul, mult_ll, cover_wt, base_value_mode
// (rank_spread | raw_priority). Unknown keys are an error.
CostConfig parse_cost_config(std::string_view text, CostConfig base = {});
CostConfig load_cost_config(const std::filesystem::path& path);
// Applies one key; throws std::invalid_argument on unknown keys or bad values.
void set_cost_key(CostConfig& cfg, std::string_view key, std::string_view value);

// Feature values for priorities sorted ascending (lowest first).
//
// rank_spread: value_0 = 1; value_i = value_{i-1} + (i + 1) / n. The spacing
// between consecutive features grows with rank, so high priorities weigh
// more than the same number of low ones.
// raw_priority: the priorities themselves.
std::vector<double> assign_feature_values(std::span<const double> ascending_priorities,
                                          BaseValueMode mode);

// prox_wt * (5 - d) for a Chebyshev cell distance d in [0, 4].
inline double proximity_factor(int rad_dist, const CostConfig& cfg) {
  return cfg.prox_wt * static_cast<double>(5 - rad_dist);
}

enum class SlotState : std::uint8_t { available, selected, deselected, occluded };

std::string_view to_string(SlotState s);

struct CandidateSlot {
  FeatureId feature_id = 0;
  Corner corner = Corner::UR;
  double value = 0.0;
  double initial_value = 0.0;
  SlotState state = SlotState::available;
};

// Marks `occluded` OCCLUDED and raises every still-available sibling by the
// occluded slot's initial value, so that a lone survivor ends up worth the
// sum of all four initial values.
void occlusion_bump(std::span<CandidateSlot, 4> slots, Corner occluded);

// The four candidates of one feature.
class FeatureSlots {
 public:
  FeatureSlots() = default;
  FeatureSlots(FeatureId id, double feature_value, const CostConfig& cfg);

  const CandidateSlot& operator[](Corner c) const { return slots_[index_of(c)]; }
  double value(Corner c) const { return slots_[index_of(c)].value; }
  bool available(Corner c) const { return (available_ >> index_of(c)) & 1u; }
  unsigned available_mask() const { return available_; }
  bool any_available() const { return available_ != 0; }

  // No-op unless the slot is available.
  void occlude(Corner c);
  void select(Corner c);
  // The selected corner, if any.
  bool selected(Corner* out) const;

 private:
  std::array<CandidateSlot, 4> slots_{};
  unsigned available_ = 0;
};

// Sums expense terms in the order given. Both engines feed terms in the same
// canonical order (partner rank, then corner), so equal inputs give
// bit-identical expenses.
class ExpenseAccumulator {
 public:
  explicit ExpenseAccumulator(const CostConfig& cfg) : cfg_(&cfg) {}

  void add_partner(double partner_value, int rad_dist) {
    conflicts_ += partner_value * proximity_factor(rad_dist, *cfg_);
  }
  void add_covered(double feature_value) { covered_ += feature_value; }
  double total() const { return conflicts_ + cfg_->cover_wt * covered_; }

 private:
  const CostConfig* cfg_;
  double conflicts_ = 0.0;
  double covered_ = 0.0;
};

struct PartnerTerm {
  double value = 0.0;
  int rad_dist = 0;
};

// sum(partner.value * proximity_factor(rad_dist)) + cover_wt * sum(covered)
double candidate_expense(std::span<const PartnerTerm> partners, std::span<const double> covered,
                         const CostConfig& cfg);

// Index of the cheapest available slot; ties go to the preferred corner.
// Returns 4 when no slot is available.
std::size_t cheapest_slot(const std::array<double, 4>& expense, unsigned available_mask);

}  // namespace trellis
