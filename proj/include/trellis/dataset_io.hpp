#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "trellis/core_model.hpp"
#include "trellis/selector.hpp"

namespace trellis {

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Bounds {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool operator==(const Bounds&) const = default;
};

// Features in world coordinates.
struct Dataset {
  std::string name;
  std::vector<Feature> features;
  Bounds bounds;

  bool operator==(const Dataset&) const = default;
};

Bounds bounds_of(const std::vector<Feature>& features);

enum class PointFormat { csv, json, xy };

// .csv -> csv, .json -> json, anything else -> xy.
PointFormat format_for(const std::filesystem::path& path);
std::optional<PointFormat> parse_point_format(std::string_view name);

// csv:  header naming columns among id,x,y,priority,text (x and y required).
// json: array of objects with those keys.
// xy:   whitespace separated "x y [weight]" lines; '#' comments allowed.
// Missing priorities become n, n-1, ..., 1 in file order; missing ids become
// the 0-based row index. Throws DatasetError naming the offending line (or
// array element) for malformed input and for duplicate ids.
Dataset parse_points(std::string_view text, PointFormat format, std::string name = {});
Dataset load_points(const std::filesystem::path& path, PointFormat format);
Dataset load_points(const std::filesystem::path& path);

void write_points_csv(const Dataset& data, std::ostream& out);
void write_points_json(const Dataset& data, std::ostream& out);
void save_points(const Dataset& data, const std::filesystem::path& path);

enum class SyntheticKind { uniform, gaussian_clusters };

std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name);

struct SyntheticParams {
  double width = 770.0;   // positions fall in [0, width) x [0, height)
  double height = 840.0;  // for uniform; cluster centers likewise
  int clusters = 40;
  double sigma = 60.0;    // cluster scatter, world units
};

// Deterministic per seed. Priorities are a random permutation of 1..n and
// ids run 0..n-1. Throws std::invalid_argument for invalid params.
Dataset generate_synthetic(SyntheticKind kind, std::size_t n, std::uint64_t seed,
                           const SyntheticParams& params = {});

enum class LayoutFormat { json, svg };

std::optional<LayoutFormat> parse_layout_format(std::string_view name);

// JSON placement records use the keys id, x, y, priority, text, labeled,
// corner and rect ([left, top, right, bottom]); corner and rect are null for
// unlabeled features.
nlohmann::json layout_to_json(const Layout& layout);
Layout layout_from_json(const nlohmann::json& j);
std::string serialize_layout(const Layout& layout, LayoutFormat format);

}  // namespace trellis
