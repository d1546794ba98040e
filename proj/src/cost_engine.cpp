#include "trellis/cost_engine.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace trellis {

std::string_view to_string(BaseValueMode m) {
  return m == BaseValueMode::rank_spread ? "rank_spread" : "raw_priority";
}

std::string_view to_string(SlotState s) {
  switch (s) {
    case SlotState::available: return "available";
    case SlotState::selected: return "selected";
    case SlotState::deselected: return "deselected";
    case SlotState::occluded: return "occluded";
  }
  return "?";
}

void validate(const CostConfig& cfg) {
  if (!(cfg.prox_wt > 0.0) || !std::isfinite(cfg.prox_wt)) {
    throw std::invalid_argument("prox_wt must be positive");
  }
  if (!(cfg.cover_wt >= 0.0) || !std::isfinite(cfg.cover_wt)) {
    throw std::invalid_argument("cover_wt must be non-negative");
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (!std::isfinite(cfg.preference_multipliers[i]) || cfg.preference_multipliers[i] <= 0.0) {
      throw std::invalid_argument("preference multipliers must be positive");
    }
    if (i > 0 && !(cfg.preference_multipliers[i] < cfg.preference_multipliers[i - 1])) {
      throw std::invalid_argument(
          "preference multipliers must strictly decrease in the order UR, LR, UL, LL");
    }
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view value) {
  const std::string buf(value);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size()) {
    throw std::invalid_argument("config key '" + std::string(key) + "': not a number: '" + buf +
                                "'");
  }
  return v;
}

}  // namespace

void set_cost_key(CostConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "prox_wt") {
    cfg.prox_wt = parse_real(key, value);
  } else if (key == "mult_ur") {
    cfg.preference_multipliers[0] = parse_real(key, value);
  } else if (key == "mult_lr") {
    cfg.preference_multipliers[1] = parse_real(key, value);
  } else if (key == "mult_ul") {
    cfg.preference_multipliers[2] = parse_real(key, value);
  } else if (key == "mult_ll") {
    cfg.preference_multipliers[3] = parse_real(key, value);
  } else if (key == "cover_wt") {
    cfg.cover_wt = parse_real(key, value);
  } else if (key == "base_value_mode") {
    if (value == "rank_spread" || value == "RANK_SPREAD") {
      cfg.base_value_mode = BaseValueMode::rank_spread;
    } else if (value == "raw_priority" || value == "RAW_PRIORITY") {
      cfg.base_value_mode = BaseValueMode::raw_priority;
    } else {
      throw std::invalid_argument("base_value_mode must be rank_spread or raw_priority");
    }
  } else {
    throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
  }
}

CostConfig parse_cost_config(std::string_view text, CostConfig base) {
  CostConfig cfg = base;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto sep = line.find_first_of("=:");
    if (sep == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    }
    try {
      set_cost_key(cfg, trim(line.substr(0, sep)), trim(line.substr(sep + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  validate(cfg);
  return cfg;
}

CostConfig load_cost_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_cost_config(buf.str());
}

std::vector<double> assign_feature_values(std::span<const double> ascending_priorities,
                                          BaseValueMode mode) {
  const std::size_t n = ascending_priorities.size();
  std::vector<double> values(n);
  if (n == 0) return values;
  if (mode == BaseValueMode::raw_priority) {
    values.assign(ascending_priorities.begin(), ascending_priorities.end());
    return values;
  }
  const double count = static_cast<double>(n);
  values[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    values[i] = values[i - 1] + static_cast<double>(i + 1) / count;
  }
  return values;
}

void occlusion_bump(std::span<CandidateSlot, 4> slots, Corner occluded) {
  CandidateSlot& gone = slots[index_of(occluded)];
  gone.state = SlotState::occluded;
  for (CandidateSlot& s : slots) {
    if (s.state == SlotState::available) s.value += gone.initial_value;
  }
}

FeatureSlots::FeatureSlots(FeatureId id, double feature_value, const CostConfig& cfg)
    : available_(0xFu) {
  for (Corner c : kCorners) {
    CandidateSlot& s = slots_[index_of(c)];
    s.feature_id = id;
    s.corner = c;
    s.initial_value = feature_value * cfg.multiplier(c);
    s.value = s.initial_value;
    s.state = SlotState::available;
  }
}

void FeatureSlots::occlude(Corner c) {
  if (!available(c)) return;
  occlusion_bump(std::span<CandidateSlot, 4>(slots_), c);
  available_ &= ~(1u << index_of(c));
}

void FeatureSlots::select(Corner c) {
  for (CandidateSlot& s : slots_) {
    if (s.corner == c) {
      s.state = SlotState::selected;
    } else if (s.state == SlotState::available) {
      s.state = SlotState::deselected;
    }
  }
  available_ = 0;
}

bool FeatureSlots::selected(Corner* out) const {
  for (const CandidateSlot& s : slots_) {
    if (s.state == SlotState::selected) {
      if (out) *out = s.corner;
      return true;
    }
  }
  return false;
}

double candidate_expense(std::span<const PartnerTerm> partners, std::span<const double> covered,
                         const CostConfig& cfg) {
  ExpenseAccumulator acc(cfg);
  for (const PartnerTerm& p : partners) acc.add_partner(p.value, p.rad_dist);
  for (double v : covered) acc.add_covered(v);
  return acc.total();
}

std::size_t cheapest_slot(const std::array<double, 4>& expense, unsigned available_mask) {
  std::size_t best = 4;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!((available_mask >> i) & 1u)) continue;
    if (best == 4 || expense[i] < expense[best]) best = i;
  }
  return best;
}

}  // namespace trellis
