#include "trellis/layout_service.hpp"

#include <algorithm>

#include <httplib.h>

namespace trellis::service {

void DatasetRegistry::add(Dataset data) {
  const auto it = std::lower_bound(datasets_.begin(), datasets_.end(), data.name,
                                   [](const Dataset& d, const std::string& n) { return d.name < n; });
  if (it != datasets_.end() && it->name == data.name) {
    *it = std::move(data);
  } else {
    datasets_.insert(it, std::move(data));
  }
}

std::size_t DatasetRegistry::load_directory(const std::filesystem::path& dir) {
  static const std::vector<std::string> kExtensions{".csv", ".json", ".xy", ".txt", ".dat"};
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (std::find(kExtensions.begin(), kExtensions.end(), ext) != kExtensions.end()) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) add(load_points(f));
  return files.size();
}

const Dataset* DatasetRegistry::find(std::string_view name) const {
  const auto it = std::lower_bound(datasets_.begin(), datasets_.end(), name,
                                   [](const Dataset& d, std::string_view n) { return d.name < n; });
  return it != datasets_.end() && it->name == name ? &*it : nullptr;
}

namespace {

Response error(int status, const std::string& message) {
  return {status, nlohmann::json{{"error", message}}.dump(), 0.0};
}

double number_or(const nlohmann::json& obj, const char* key, double fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw std::invalid_argument(std::string("'") + key + "' must be a number");
  return it->get<double>();
}

double required_number(const nlohmann::json& obj, const char* key, const char* where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw std::invalid_argument(std::string(where) + "." + key + " is required");
  }
  return it->get<double>();
}

}  // namespace

Response handle_layout(const DatasetRegistry& registry, std::string_view request_body) {
  nlohmann::json req;
  try {
    req = nlohmann::json::parse(request_body);
  } catch (const nlohmann::json::parse_error& e) {
    return error(400, std::string("malformed request: ") + e.what());
  }
  if (!req.is_object()) return error(400, "request must be a JSON object");

  Dataset inline_data;
  const Dataset* data = nullptr;
  Viewport view;
  LabelDims dims;
  CostConfig cfg;
  try {
    if (const auto it = req.find("dataset"); it != req.end() && !it->is_null()) {
      if (!it->is_string()) return error(400, "'dataset' must be a name");
      data = registry.find(it->get<std::string>());
      if (!data) return error(404, "unknown dataset '" + it->get<std::string>() + "'");
    } else if (const auto f = req.find("features"); f != req.end()) {
      inline_data = parse_points(f->dump(), PointFormat::json, "inline");
      data = &inline_data;
    } else {
      return error(400, "request needs 'dataset' or 'features'");
    }

    const nlohmann::json empty = nlohmann::json::object();
    const nlohmann::json& vp = req.contains("viewport") ? req["viewport"] : empty;
    const nlohmann::json& vw = req.contains("view") ? req["view"] : vp;
    if (!vp.is_object() || !vw.is_object()) return error(400, "'viewport' and 'view' must be objects");
    view.offset = {number_or(vp, "x", 0.0), number_or(vp, "y", 0.0)};
    view.scale = number_or(vp, "scale", 1.0);
    view.width = required_number(vw, "width", "view");
    view.height = required_number(vw, "height", "view");
    if (!view.valid()) return error(400, "viewport needs positive width, height and scale");

    if (!req.contains("label") || !req["label"].is_object()) return error(400, "'label' is required");
    dims = {required_number(req["label"], "width", "label"),
            required_number(req["label"], "height", "label")};
    if (!dims.valid()) return error(400, "label dimensions must be positive");

    if (const auto c = req.find("config"); c != req.end() && !c->is_null()) {
      if (!c->is_object()) return error(400, "'config' must be an object");
      for (const auto& [key, value] : c->items()) {
        set_cost_key(cfg, key, value.is_string() ? value.get<std::string>() : value.dump());
      }
      validate(cfg);
    }
  } catch (const DatasetError& e) {
    return error(400, e.what());
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  }

  const std::vector<Feature> screen = project(data->features, view);
  const Layout layout = place_labels(screen, view, dims, cfg);
  nlohmann::json body = layout_to_json(layout);
  body["dataset"] = data->name;
  body["elapsed_ms"] = layout.stats.elapsed_ms;
  return {200, body.dump(), layout.stats.elapsed_ms};
}

Response handle_list_datasets(const DatasetRegistry& registry) {
  nlohmann::json list = nlohmann::json::array();
  for (const Dataset& d : registry.datasets()) {
    list.push_back({{"name", d.name},
                    {"count", d.features.size()},
                    {"bounds",
                     {{"min_x", d.bounds.min_x},
                      {"min_y", d.bounds.min_y},
                      {"max_x", d.bounds.max_x},
                      {"max_y", d.bounds.max_y}}}});
  }
  return {200, nlohmann::json{{"datasets", std::move(list)}}.dump(), 0.0};
}

struct LayoutServer::Impl {
  const DatasetRegistry& registry;
  httplib::Server server;

  explicit Impl(const DatasetRegistry& r) : registry(r) {}
};

LayoutServer::LayoutServer(const DatasetRegistry& registry)
    : impl_(std::make_unique<Impl>(registry)) {
  auto& srv = impl_->server;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  srv.Get("/datasets", [this](const httplib::Request&, httplib::Response& res) {
    const Response r = handle_list_datasets(impl_->registry);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  });
  srv.Post("/layout", [this](const httplib::Request& req, httplib::Response& res) {
    const Response r = handle_layout(impl_->registry, req.body);
    res.status = r.status;
    res.set_header("X-Elapsed-Ms", std::to_string(r.elapsed_ms));
    res.set_content(r.body, "application/json");
  });
}

LayoutServer::~LayoutServer() { stop(); }

int LayoutServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool LayoutServer::run() { return impl_->server.listen_after_bind(); }

void LayoutServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace trellis::service
