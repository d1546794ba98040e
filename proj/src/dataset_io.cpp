#include "trellis/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

namespace trellis {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool parse_real(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  const std::string buf(text);
  char* end = nullptr;
  out = std::strtod(buf.c_str(), &end);
  return end == buf.c_str() + buf.size() && std::isfinite(out);
}

bool parse_integer(std::string_view text, std::int64_t& out) {
  text = trim(text);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return !text.empty() && res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

[[noreturn]] void fail_at(std::string_view where, std::size_t number, const std::string& what) {
  throw DatasetError(std::string(where) + " " + std::to_string(number) + ": " + what);
}

// Splits one CSV record; fields may be double-quoted with "" escapes.
std::vector<std::string> split_csv(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"' && trim(field).empty()) {
      quoted = true;
      was_quoted = true;
      field.clear();
    } else if (ch == ',') {
      fields.push_back(was_quoted ? field : std::string(trim(field)));
      field.clear();
      was_quoted = false;
    } else {
      field += ch;
    }
  }
  if (quoted) fail_at("line", line_no, "unterminated quoted field");
  fields.push_back(was_quoted ? field : std::string(trim(field)));
  return fields;
}

struct RawRow {
  std::optional<std::int64_t> id;
  double x = 0.0;
  double y = 0.0;
  std::optional<double> priority;
  std::string text;
  std::size_t origin = 0;  // line number or array index, for messages
};

Dataset finish(std::vector<RawRow> rows, std::string name, std::string_view unit) {
  Dataset data;
  data.name = std::move(name);
  const std::size_t n = rows.size();
  data.features.reserve(n);
  std::unordered_set<std::int64_t> seen;
  for (std::size_t i = 0; i < n; ++i) {
    RawRow& row = rows[i];
    Feature f;
    f.id = row.id.value_or(static_cast<std::int64_t>(i));
    f.position = {row.x, row.y};
    f.priority = row.priority.value_or(static_cast<double>(n - i));
    f.text = std::move(row.text);
    if (!seen.insert(f.id).second) {
      fail_at(unit, row.origin, "duplicate id " + std::to_string(f.id));
    }
    data.features.push_back(std::move(f));
  }
  data.bounds = bounds_of(data.features);
  return data;
}

Dataset parse_csv(std::string_view text, std::string name) {
  std::vector<RawRow> rows;
  int col_id = -1, col_x = -1, col_y = -1, col_priority = -1, col_text = -1;
  std::size_t columns = 0;
  bool have_header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv(line, line_no);
    if (!have_header) {
      have_header = true;
      columns = fields.size();
      for (std::size_t c = 0; c < fields.size(); ++c) {
        const std::string& h = fields[c];
        int* slot = h == "id" ? &col_id
                    : h == "x" ? &col_x
                    : h == "y" ? &col_y
                    : h == "priority" ? &col_priority
                    : h == "text" ? &col_text
                    : nullptr;
        if (!slot) fail_at("line", line_no, "unknown column '" + h + "'");
        if (*slot >= 0) fail_at("line", line_no, "duplicate column '" + h + "'");
        *slot = static_cast<int>(c);
      }
      if (col_x < 0 || col_y < 0) fail_at("line", line_no, "header must name x and y columns");
      continue;
    }
    if (fields.size() != columns) {
      fail_at("line", line_no,
              "expected " + std::to_string(columns) + " fields, got " + std::to_string(fields.size()));
    }
    RawRow row;
    row.origin = line_no;
    if (!parse_real(fields[col_x], row.x)) fail_at("line", line_no, "bad x '" + fields[col_x] + "'");
    if (!parse_real(fields[col_y], row.y)) fail_at("line", line_no, "bad y '" + fields[col_y] + "'");
    if (col_id >= 0) {
      std::int64_t id = 0;
      if (!parse_integer(fields[col_id], id)) fail_at("line", line_no, "bad id '" + fields[col_id] + "'");
      row.id = id;
    }
    if (col_priority >= 0) {
      double p = 0.0;
      if (!parse_real(fields[col_priority], p)) {
        fail_at("line", line_no, "bad priority '" + fields[col_priority] + "'");
      }
      row.priority = p;
    }
    if (col_text >= 0) row.text = fields[col_text];
    rows.push_back(std::move(row));
  }
  if (!have_header) throw DatasetError("csv input has no header line");
  return finish(std::move(rows), std::move(name), "line");
}

Dataset parse_xy(std::string_view text, std::string name) {
  std::vector<RawRow> rows;
  std::optional<std::int64_t> declared;
  bool first_data_line = true;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::istringstream tokens{std::string(line)};
    std::vector<std::string> parts;
    for (std::string t; tokens >> t;) parts.push_back(t);
    if (parts.empty()) continue;
    const bool was_first = first_data_line;
    first_data_line = false;
    if (was_first && parts.size() == 1) {
      std::int64_t count = 0;
      if (parse_integer(parts[0], count) && count >= 0) {
        declared = count;
        continue;
      }
    }
    if (parts.size() < 2 || parts.size() > 3) {
      fail_at("line", line_no, "expected 'x y [weight]'");
    }
    RawRow row;
    row.origin = line_no;
    if (!parse_real(parts[0], row.x)) fail_at("line", line_no, "bad x '" + parts[0] + "'");
    if (!parse_real(parts[1], row.y)) fail_at("line", line_no, "bad y '" + parts[1] + "'");
    if (parts.size() == 3) {
      double w = 0.0;
      if (!parse_real(parts[2], w)) fail_at("line", line_no, "bad weight '" + parts[2] + "'");
      row.priority = w;
    }
    rows.push_back(std::move(row));
  }
  if (declared && static_cast<std::size_t>(*declared) != rows.size()) {
    throw DatasetError("xy header declares " + std::to_string(*declared) + " points but " +
                       std::to_string(rows.size()) + " were read");
  }
  return finish(std::move(rows), std::move(name), "line");
}

Dataset parse_json_points(std::string_view text, std::string name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DatasetError(std::string("json: ") + e.what());
  }
  if (!doc.is_array()) throw DatasetError("json points must be an array of objects");
  std::vector<RawRow> rows;
  rows.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const nlohmann::json& item = doc[i];
    if (!item.is_object()) fail_at("element", i, "not an object");
    RawRow row;
    row.origin = i;
    auto number = [&](const char* key, double& out) {
      const auto it = item.find(key);
      if (it == item.end() || !it->is_number()) fail_at("element", i, std::string("missing numeric ") + key);
      out = it->get<double>();
      if (!std::isfinite(out)) fail_at("element", i, std::string("non-finite ") + key);
    };
    number("x", row.x);
    number("y", row.y);
    if (const auto it = item.find("id"); it != item.end()) {
      if (!it->is_number_integer()) fail_at("element", i, "id must be an integer");
      row.id = it->get<std::int64_t>();
    }
    if (const auto it = item.find("priority"); it != item.end() && !it->is_null()) {
      double p = 0.0;
      number("priority", p);
      row.priority = p;
    }
    if (const auto it = item.find("text"); it != item.end() && !it->is_null()) {
      if (!it->is_string()) fail_at("element", i, "text must be a string");
      row.text = it->get<std::string>();
    }
    rows.push_back(std::move(row));
  }
  return finish(std::move(rows), std::move(name), "element");
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string serialize_svg(const Layout& layout) {
  const double font = layout.label.height * 0.8;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_real(layout.view.width)
      << "\" height=\"" << format_real(layout.view.height) << "\" viewBox=\"0 0 "
      << format_real(layout.view.width) << " " << format_real(layout.view.height) << "\">\n";
  out << "<g fill=\"#1f4e79\">\n";
  for (const Placement& p : layout.placements) {
    out << "<circle cx=\"" << format_real(p.position.x) << "\" cy=\"" << format_real(p.position.y)
        << "\" r=\"1.5\"/>\n";
  }
  out << "</g>\n<g fill=\"#fff8dc\" fill-opacity=\"0.85\" stroke=\"#8b4513\" stroke-width=\"0.5\">\n";
  for (const Placement& p : layout.placements) {
    if (!p.labeled()) continue;
    out << "<rect x=\"" << format_real(p.rect.left) << "\" y=\"" << format_real(p.rect.top)
        << "\" width=\"" << format_real(p.rect.width()) << "\" height=\""
        << format_real(p.rect.height()) << "\"/>\n";
  }
  out << "</g>\n<g font-family=\"monospace\" font-size=\"" << format_real(font) << "\">\n";
  for (const Placement& p : layout.placements) {
    if (!p.labeled() || p.text.empty()) continue;
    // A nested viewport clips the text to its label box.
    out << "<svg x=\"" << format_real(p.rect.left) << "\" y=\"" << format_real(p.rect.top)
        << "\" width=\"" << format_real(p.rect.width()) << "\" height=\""
        << format_real(p.rect.height()) << "\"><text x=\"1\" y=\""
        << format_real(layout.label.height * 0.85) << "\">" << xml_escape(p.text)
        << "</text></svg>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace

Bounds bounds_of(const std::vector<Feature>& features) {
  if (features.empty()) return {};
  Bounds b{features[0].position.x, features[0].position.y, features[0].position.x,
           features[0].position.y};
  for (const Feature& f : features) {
    b.min_x = std::min(b.min_x, f.position.x);
    b.min_y = std::min(b.min_y, f.position.y);
    b.max_x = std::max(b.max_x, f.position.x);
    b.max_y = std::max(b.max_y, f.position.y);
  }
  return b;
}

PointFormat format_for(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".csv") return PointFormat::csv;
  if (ext == ".json") return PointFormat::json;
  return PointFormat::xy;
}

std::optional<PointFormat> parse_point_format(std::string_view name) {
  if (name == "csv") return PointFormat::csv;
  if (name == "json") return PointFormat::json;
  if (name == "xy") return PointFormat::xy;
  return std::nullopt;
}

Dataset parse_points(std::string_view text, PointFormat format, std::string name) {
  switch (format) {
    case PointFormat::csv: return parse_csv(text, std::move(name));
    case PointFormat::json: return parse_json_points(text, std::move(name));
    case PointFormat::xy: return parse_xy(text, std::move(name));
  }
  throw DatasetError("unknown point format");
}

Dataset load_points(const std::filesystem::path& path, PointFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_points(buf.str(), format, path.stem().string());
  } catch (const DatasetError& e) {
    throw DatasetError(path.string() + ": " + e.what());
  }
}

Dataset load_points(const std::filesystem::path& path) { return load_points(path, format_for(path)); }

void write_points_csv(const Dataset& data, std::ostream& out) {
  out << "id,x,y,priority,text\n";
  for (const Feature& f : data.features) {
    out << f.id << ',' << format_real(f.position.x) << ',' << format_real(f.position.y) << ','
        << format_real(f.priority) << ',' << csv_field(f.text) << '\n';
  }
}

void write_points_json(const Dataset& data, std::ostream& out) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Feature& f : data.features) {
    arr.push_back({{"id", f.id}, {"x", f.position.x}, {"y", f.position.y},
                   {"priority", f.priority}, {"text", f.text}});
  }
  out << arr.dump() << '\n';
}

void save_points(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError("cannot write " + path.string());
  if (format_for(path) == PointFormat::json) {
    write_points_json(data, out);
  } else {
    write_points_csv(data, out);
  }
}

std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name) {
  if (name == "uniform") return SyntheticKind::uniform;
  if (name == "clusters" || name == "gaussian_clusters") return SyntheticKind::gaussian_clusters;
  return std::nullopt;
}

Dataset generate_synthetic(SyntheticKind kind, std::size_t n, std::uint64_t seed,
                           const SyntheticParams& params) {
  if (!(params.width > 0.0) || !(params.height > 0.0) || !std::isfinite(params.width) ||
      !std::isfinite(params.height)) {
    throw std::invalid_argument("synthetic bounds must be positive");
  }
  if (kind == SyntheticKind::gaussian_clusters && (params.clusters < 1 || !(params.sigma >= 0.0))) {
    throw std::invalid_argument("clusters must be >= 1 and sigma >= 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, params.width);
  std::uniform_real_distribution<double> uy(0.0, params.height);

  Dataset data;
  data.name = kind == SyntheticKind::uniform ? "uniform" : "clusters";
  data.features.resize(n);
  if (kind == SyntheticKind::uniform) {
    for (Feature& f : data.features) {
      f.position.x = ux(rng);
      f.position.y = uy(rng);
    }
  } else {
    std::vector<ScreenPoint> centers(static_cast<std::size_t>(params.clusters));
    for (ScreenPoint& c : centers) {
      c.x = ux(rng);
      c.y = uy(rng);
    }
    std::uniform_int_distribution<std::size_t> pick(0, centers.size() - 1);
    std::normal_distribution<double> scatter(0.0, params.sigma);
    for (Feature& f : data.features) {
      const ScreenPoint c = centers[pick(rng)];
      f.position.x = c.x + scatter(rng);
      f.position.y = c.y + scatter(rng);
    }
  }
  std::vector<std::size_t> priorities(n);
  std::iota(priorities.begin(), priorities.end(), std::size_t{1});
  std::shuffle(priorities.begin(), priorities.end(), rng);
  for (std::size_t i = 0; i < n; ++i) {
    data.features[i].id = static_cast<FeatureId>(i);
    data.features[i].priority = static_cast<double>(priorities[i]);
    data.features[i].text = "P" + std::to_string(i);
  }
  data.bounds = bounds_of(data.features);
  return data;
}

std::optional<LayoutFormat> parse_layout_format(std::string_view name) {
  if (name == "json") return LayoutFormat::json;
  if (name == "svg") return LayoutFormat::svg;
  return std::nullopt;
}

nlohmann::json layout_to_json(const Layout& layout) {
  nlohmann::json placements = nlohmann::json::array();
  for (const Placement& p : layout.placements) {
    nlohmann::json rec = {{"id", p.id},
                          {"x", p.position.x},
                          {"y", p.position.y},
                          {"priority", p.priority},
                          {"text", p.text},
                          {"labeled", p.labeled()}};
    if (p.labeled()) {
      rec["corner"] = std::string(to_string(*p.corner));
      rec["rect"] = {p.rect.left, p.rect.top, p.rect.right, p.rect.bottom};
    } else {
      rec["corner"] = nullptr;
      rec["rect"] = nullptr;
    }
    placements.push_back(std::move(rec));
  }
  const LayoutStats& s = layout.stats;
  return {
      {"view",
       {{"width", layout.view.width},
        {"height", layout.view.height},
        {"x", layout.view.offset.x},
        {"y", layout.view.offset.y},
        {"scale", layout.view.scale}}},
      {"label", {{"width", layout.label.width}, {"height", layout.label.height}}},
      {"placements", std::move(placements)},
      {"stats",
       {{"total", s.total},
        {"indexed", s.indexed},
        {"margin", s.margin},
        {"culled", s.culled},
        {"labeled", s.labeled},
        {"unlabeled", s.unlabeled},
        {"skipped_occluded", s.skipped_occluded},
        {"pair_tests", s.pair_tests},
        {"predicate_evaluations", s.predicate_evaluations},
        {"elapsed_ms", s.elapsed_ms}}},
  };
}

Layout layout_from_json(const nlohmann::json& j) {
  try {
    Layout layout;
    const auto& v = j.at("view");
    layout.view.width = v.at("width").get<double>();
    layout.view.height = v.at("height").get<double>();
    layout.view.offset = {v.at("x").get<double>(), v.at("y").get<double>()};
    layout.view.scale = v.at("scale").get<double>();
    layout.label = {j.at("label").at("width").get<double>(), j.at("label").at("height").get<double>()};
    for (const auto& rec : j.at("placements")) {
      Placement p;
      p.id = rec.at("id").get<FeatureId>();
      p.position = {rec.at("x").get<double>(), rec.at("y").get<double>()};
      p.priority = rec.at("priority").get<double>();
      p.text = rec.at("text").get<std::string>();
      if (rec.at("labeled").get<bool>()) {
        p.corner = parse_corner(rec.at("corner").get<std::string>());
        if (!p.corner) throw DatasetError("bad corner in layout json");
        const auto& r = rec.at("rect");
        p.rect = {r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>(),
                  r.at(3).get<double>()};
      }
      layout.placements.push_back(std::move(p));
    }
    const auto& s = j.at("stats");
    LayoutStats& st = layout.stats;
    st.total = s.at("total").get<std::size_t>();
    st.indexed = s.at("indexed").get<std::size_t>();
    st.margin = s.at("margin").get<std::size_t>();
    st.culled = s.at("culled").get<std::size_t>();
    st.labeled = s.at("labeled").get<std::size_t>();
    st.unlabeled = s.at("unlabeled").get<std::size_t>();
    st.skipped_occluded = s.at("skipped_occluded").get<std::size_t>();
    st.pair_tests = s.at("pair_tests").get<std::uint64_t>();
    st.predicate_evaluations = s.at("predicate_evaluations").get<std::uint64_t>();
    st.elapsed_ms = s.at("elapsed_ms").get<double>();
    return layout;
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(std::string("layout json: ") + e.what());
  }
}

std::string serialize_layout(const Layout& layout, LayoutFormat format) {
  if (format == LayoutFormat::svg) return serialize_svg(layout);
  return layout_to_json(layout).dump(1) + "\n";
}

}  // namespace trellis
