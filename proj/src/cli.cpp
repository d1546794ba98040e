#include "trellis/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "trellis/conflict_kernel.hpp"
#include "trellis/dataset_io.hpp"
#include "trellis/layout_service.hpp"
#include "trellis/oracle.hpp"
#include "trellis/selector.hpp"

namespace trellis::cli {

std::optional<LabelDims> parse_wxh(std::string_view text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string_view::npos) return std::nullopt;
  const std::string w(text.substr(0, x));
  const std::string h(text.substr(x + 1));
  char* end = nullptr;
  LabelDims d;
  d.width = std::strtod(w.c_str(), &end);
  if (w.empty() || end != w.c_str() + w.size()) return std::nullopt;
  d.height = std::strtod(h.c_str(), &end);
  if (h.empty() || end != h.c_str() + h.size()) return std::nullopt;
  if (!d.valid()) return std::nullopt;
  return d;
}

std::optional<std::vector<std::size_t>> parse_sizes(std::string_view text) {
  std::vector<std::size_t> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string item(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    std::size_t scale = 1;
    if (!item.empty() && (item.back() == 'K' || item.back() == 'k')) {
      scale = 1000;
      item.pop_back();
    }
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size() || !(v >= 1.0)) return std::nullopt;
    out.push_back(static_cast<std::size_t>(std::llround(v * static_cast<double>(scale))));
  }
  if (out.empty()) return std::nullopt;
  return out;
}

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

LabelDims dims_arg(const std::string& text, const char* flag) {
  const auto d = parse_wxh(text);
  if (!d) throw UsageError(std::string(flag) + " expects WxH with positive reals, got '" + text + "'");
  return *d;
}

std::string fmt_dims(LabelDims d) {
  std::ostringstream s;
  s << d.width << "x" << d.height;
  return s.str();
}

std::vector<LabelDims> dims_list(const std::string& text) {
  std::vector<LabelDims> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(dims_arg(item, "--labels"));
  if (out.empty()) throw UsageError("--labels needs at least one WxH entry");
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << content;
}

struct ViewOptions {
  std::string view = "770x840";
  std::string label = "150x12";
  double origin_x = 0.0;
  double origin_y = 0.0;
  double scale = 1.0;

  Viewport viewport() const {
    const LabelDims v = dims_arg(view, "--view");
    Viewport vp{v.width, v.height, {origin_x, origin_y}, scale};
    if (!vp.valid()) throw UsageError("--scale must be positive");
    return vp;
  }
  LabelDims dims() const { return dims_arg(label, "--label"); }
};

void add_view_options(CLI::App* cmd, ViewOptions& o) {
  cmd->add_option("--view", o.view, "viewport size WxH in pixels")->capture_default_str();
  cmd->add_option("--label", o.label, "label size WxH in pixels")->capture_default_str();
  cmd->add_option("--origin-x", o.origin_x, "world x at the screen origin");
  cmd->add_option("--origin-y", o.origin_y, "world y at the screen origin");
  cmd->add_option("--scale", o.scale, "world to screen scale")->capture_default_str();
}

Dataset load_input(const std::string& path, const std::string& format_name) {
  if (format_name.empty()) return load_points(path);
  const auto f = parse_point_format(format_name);
  if (!f) throw UsageError("--input-format must be csv, json or xy");
  return load_points(path, *f);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string environment_description() {
  std::string cpu = "unknown cpu";
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);) {
    if (line.rfind("model name", 0) == 0) {
      cpu = line.substr(line.find(':') + 2);
      break;
    }
  }
  std::ostringstream s;
  s << cpu << ", " << std::thread::hardware_concurrency() << " hw threads, single-threaded run";
#if defined(__clang__)
  s << ", clang " << __clang_version__;
#elif defined(__GNUC__)
  s << ", gcc " << __VERSION__;
#endif
  return s.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Real-time point-feature label placement with a quarter-region trellis"};
  app.require_subcommand(1);

  // label
  struct {
    std::string input, input_format, engine = "trellis", config, out_path, format = "json";
    ViewOptions view;
  } label;
  auto* cmd_label = app.add_subcommand("label", "label a point file");
  cmd_label->add_option("input", label.input, "points file (csv, json or xy)")->required();
  cmd_label->add_option("--input-format", label.input_format, "csv, json or xy (default: by extension)");
  add_view_options(cmd_label, label.view);
  cmd_label->add_option("--engine", label.engine, "trellis or oracle")->capture_default_str();
  cmd_label->add_option("--config", label.config, "cost config file");
  cmd_label->add_option("--out", label.out_path, "output path (default: stdout)");
  cmd_label->add_option("--format", label.format, "json or svg")->capture_default_str();

  // bench
  struct {
    std::string sizes = "1K,3K,5K,11K,25K,50K,75K", labels = "50x8,100x10,150x12,200x14",
                view = "770x840", kind = "uniform", json;
    std::uint64_t seed = 1;
    int runs = 5;
  } bench;
  auto* cmd_bench = app.add_subcommand("bench", "time place_labels on synthetic data");
  cmd_bench->add_option("--sizes", bench.sizes, "point counts, e.g. 1K,11K")->capture_default_str();
  cmd_bench->add_option("--labels", bench.labels, "label sizes, e.g. 150x12,1.0x0.4")->capture_default_str();
  cmd_bench->add_option("--view", bench.view, "viewport WxH")->capture_default_str();
  cmd_bench->add_option("--seed", bench.seed, "generator seed")->capture_default_str();
  cmd_bench->add_option("--kind", bench.kind, "uniform or clusters")->capture_default_str();
  cmd_bench->add_option("--runs", bench.runs, "timed runs per cell (median reported)")->capture_default_str();
  cmd_bench->add_option("--json", bench.json, "also write the report as JSON here");

  // zoom
  struct {
    std::string input, input_format, out_dir = ".", format = "json", config;
    int levels = 8;
    double factor = 2.0;
    ViewOptions view;
  } zoom;
  auto* cmd_zoom = app.add_subcommand("zoom", "precompute layouts for several zoom levels");
  cmd_zoom->add_option("input", zoom.input, "points file")->required();
  cmd_zoom->add_option("--input-format", zoom.input_format, "csv, json or xy");
  cmd_zoom->add_option("--levels", zoom.levels, "number of levels")->capture_default_str();
  cmd_zoom->add_option("--factor", zoom.factor, "magnification per level")->capture_default_str();
  cmd_zoom->add_option("--out-dir", zoom.out_dir, "directory for level files and manifest.json");
  cmd_zoom->add_option("--format", zoom.format, "json or svg")->capture_default_str();
  cmd_zoom->add_option("--config", zoom.config, "cost config file");
  add_view_options(cmd_zoom, zoom.view);

  // gen
  struct {
    std::string kind = "uniform", out;
    std::size_t n = 1000;
    std::uint64_t seed = 1;
    SyntheticParams params;
  } gen;
  auto* cmd_gen = app.add_subcommand("gen", "generate a synthetic point file");
  cmd_gen->add_option("--kind", gen.kind, "uniform or clusters")->capture_default_str();
  cmd_gen->add_option("--n", gen.n, "number of points")->capture_default_str();
  cmd_gen->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
  cmd_gen->add_option("--out", gen.out, "output path (.csv or .json)")->required();
  cmd_gen->add_option("--width", gen.params.width, "bounds width")->capture_default_str();
  cmd_gen->add_option("--height", gen.params.height, "bounds height")->capture_default_str();
  cmd_gen->add_option("--clusters", gen.params.clusters, "cluster count")->capture_default_str();
  cmd_gen->add_option("--sigma", gen.params.sigma, "cluster spread")->capture_default_str();

  // serve
  struct {
    std::string host = "127.0.0.1", data;
    int port = 8080;
  } serve;
  auto* cmd_serve = app.add_subcommand("serve", "run the layout service");
  cmd_serve->add_option("--port", serve.port, "listen port")->capture_default_str();
  cmd_serve->add_option("--host", serve.host, "listen address")->capture_default_str();
  cmd_serve->add_option("--data", serve.data, "directory of datasets to preload");

  // dispatch
  std::string dispatch_label = "150x12";
  auto* cmd_dispatch = app.add_subcommand("dispatch", "print the per-offset conflict test table");
  cmd_dispatch->add_option("--label", dispatch_label, "label size WxH")->capture_default_str();

  std::vector<const char*> argv{"trellis-label"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (*cmd_label) {
      const Viewport view = label.view.viewport();
      const LabelDims dims = label.view.dims();
      const auto format = parse_layout_format(label.format);
      if (!format) throw UsageError("--format must be json or svg");
      if (label.engine != "trellis" && label.engine != "oracle") {
        throw UsageError("--engine must be trellis or oracle");
      }
      const CostConfig cfg = label.config.empty() ? CostConfig{} : load_cost_config(label.config);
      const Dataset data = load_input(label.input, label.input_format);
      const std::vector<Feature> screen = project(data.features, view);
      const Layout layout = label.engine == "oracle"
                                ? oracle::reference_selection(screen, view, dims, cfg)
                                : place_labels(screen, view, dims, cfg);
      const std::string text = serialize_layout(layout, *format);
      std::ostringstream stats;
      stats << layout.stats.labeled << "/" << layout.stats.total << " " << std::fixed
            << std::setprecision(3) << layout.stats.elapsed_ms << "\n";
      if (label.out_path.empty()) {
        out << text;
        err << stats.str();
      } else {
        write_file(label.out_path, text);
        out << stats.str();
      }
      return kOk;
    }

    if (*cmd_bench) {
      const auto sizes = parse_sizes(bench.sizes);
      if (!sizes) throw UsageError("--sizes expects counts like 1K,11K");
      const std::vector<LabelDims> labels = dims_list(bench.labels);
      const LabelDims v = dims_arg(bench.view, "--view");
      const auto kind = parse_synthetic_kind(bench.kind);
      if (!kind) throw UsageError("--kind must be uniform or clusters");
      if (bench.runs < 1) throw UsageError("--runs must be at least 1");
      const Viewport view{v.width, v.height, {0.0, 0.0}, 1.0};
      SyntheticParams params;
      params.width = v.width;
      params.height = v.height;

      nlohmann::json rows = nlohmann::json::array();
      std::vector<std::vector<double>> seconds(sizes->size());
      std::vector<std::vector<std::size_t>> placed(sizes->size());
      for (std::size_t i = 0; i < sizes->size(); ++i) {
        const Dataset data = generate_synthetic(*kind, (*sizes)[i], bench.seed, params);
        for (const LabelDims& dims : labels) {
          std::vector<double> runs;
          std::size_t labeled = 0;
          for (int r = 0; r < bench.runs; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            const Layout layout = place_labels(data.features, view, dims);
            runs.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
            labeled = layout.stats.labeled;
          }
          const double s = median(runs);
          seconds[i].push_back(s);
          placed[i].push_back(labeled);
          rows.push_back({{"n", (*sizes)[i]},
                          {"label", fmt_dims(dims)},
                          {"elapsed_s", s},
                          {"labels_placed", labeled}});
        }
      }

      auto print_table = [&](const char* title, auto cell) {
        out << title << "\n" << std::left << std::setw(10) << "# pts";
        for (const LabelDims& d : labels) out << std::setw(16) << fmt_dims(d);
        out << "\n";
        for (std::size_t i = 0; i < sizes->size(); ++i) {
          const std::size_t n = (*sizes)[i];
          std::ostringstream name;
          if (n % 1000 == 0) name << n / 1000 << "K"; else name << n;
          out << std::setw(10) << name.str();
          for (std::size_t j = 0; j < labels.size(); ++j) out << std::setw(16) << cell(i, j);
          out << "\n";
        }
      };
      out << "view " << bench.view << ", " << bench.kind << " points, seed " << bench.seed
          << ", median of " << bench.runs << " runs\n";
      print_table("Labeling speed (seconds)", [&](std::size_t i, std::size_t j) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(4) << seconds[i][j];
        return s.str();
      });
      print_table("Labels placed", [&](std::size_t i, std::size_t j) { return std::to_string(placed[i][j]); });
      const std::string env = environment_description();
      out << "environment: " << env << "\n";
      if (!bench.json.empty()) {
        const nlohmann::json report = {{"view", bench.view}, {"kind", bench.kind},
                                       {"seed", bench.seed}, {"runs", bench.runs},
                                       {"environment", env}, {"rows", rows}};
        write_file(bench.json, report.dump(1) + "\n");
      }
      return kOk;
    }

    if (*cmd_zoom) {
      const Viewport view = zoom.view.viewport();
      const LabelDims dims = zoom.view.dims();
      const auto format = parse_layout_format(zoom.format);
      if (!format) throw UsageError("--format must be json or svg");
      if (zoom.levels < 1) throw UsageError("--levels must be at least 1");
      if (!(zoom.factor > 1.0)) throw UsageError("--factor must be greater than 1");
      const CostConfig cfg = zoom.config.empty() ? CostConfig{} : load_cost_config(zoom.config);
      const Dataset data = load_input(zoom.input, zoom.input_format);

      const auto t0 = std::chrono::steady_clock::now();
      const std::vector<Layout> layouts =
          precompute_zoom_levels(data.features, view, dims, zoom.levels, zoom.factor, cfg);
      const double total_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

      std::filesystem::create_directories(zoom.out_dir);
      nlohmann::json entries = nlohmann::json::array();
      for (std::size_t k = 0; k < layouts.size(); ++k) {
        const std::string file = "level_" + std::to_string(k) + "." + zoom.format;
        write_file((std::filesystem::path(zoom.out_dir) / file).string(),
                   serialize_layout(layouts[k], *format));
        entries.push_back({{"level", k},
                           {"scale", std::pow(zoom.factor, static_cast<double>(k))},
                           {"label", {{"width", layouts[k].label.width}, {"height", layouts[k].label.height}}},
                           {"file", file},
                           {"labeled", layouts[k].stats.labeled},
                           {"elapsed_ms", layouts[k].stats.elapsed_ms}});
      }
      const nlohmann::json manifest = {{"input", zoom.input}, {"factor", zoom.factor},
                                       {"levels", entries}, {"total_ms", total_ms}};
      write_file((std::filesystem::path(zoom.out_dir) / "manifest.json").string(), manifest.dump(1) + "\n");
      out << layouts.size() << " levels precomputed in " << std::fixed << std::setprecision(3)
          << total_ms << " ms\n";
      return kOk;
    }

    if (*cmd_gen) {
      const auto kind = parse_synthetic_kind(gen.kind);
      if (!kind) throw UsageError("--kind must be uniform or clusters");
      save_points(generate_synthetic(*kind, gen.n, gen.seed, gen.params), gen.out);
      out << "wrote " << gen.n << " points to " << gen.out << "\n";
      return kOk;
    }

    if (*cmd_serve) {
      service::DatasetRegistry registry;
      if (!serve.data.empty()) registry.load_directory(serve.data);
      service::LayoutServer server(registry);
      const int port = server.bind(serve.host, serve.port);
      if (port < 0) {
        err << "error: cannot bind " << serve.host << ":" << serve.port << "\n";
        return kInternalError;
      }
      out << "serving " << registry.datasets().size() << " datasets on http://" << serve.host
          << ":" << port << std::endl;
      return server.run() ? kOk : kInternalError;
    }

    if (*cmd_dispatch) {
      out << build_dispatch_table(dims_arg(dispatch_label, "--label")).dump();
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DatasetError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kUsageError;
}

}  // namespace trellis::cli
