#pragma once

// Stateless layout endpoint for interactive zoom/pan clients.
//
//   GET  /datasets  -> {"datasets": [{"name", "count", "bounds": {...}}, ...]}
//   POST /layout    -> layout JSON plus "elapsed_ms" (also in X-Elapsed-Ms)
//
// Layout request body:
//   {
//     "dataset": "name",               // or "features": [{id,x,y,priority,text}, ...]
//     "viewport": {"x": 0, "y": 0, "scale": 1},  // world point at screen origin
//     "view": {"width": 770, "height": 840},
//     "label": {"width": 150, "height": 12},
//     "config": {"prox_wt": 0.5, ...}  // optional, same keys as config files
//   }

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "trellis/dataset_io.hpp"

namespace trellis::service {

class DatasetRegistry {
 public:
  // Replaces any dataset of the same name.
  void add(Dataset data);
  // Loads every .csv, .json, .xy, .txt and .dat file; returns the count.
  std::size_t load_directory(const std::filesystem::path& dir);

  const Dataset* find(std::string_view name) const;
  const std::vector<Dataset>& datasets() const { return datasets_; }

 private:
  std::vector<Dataset> datasets_;  // sorted by name
};

struct Response {
  int status = 200;
  std::string body;  // JSON
  double elapsed_ms = 0.0;
};

Response handle_layout(const DatasetRegistry& registry, std::string_view request_body);
Response handle_list_datasets(const DatasetRegistry& registry);

class LayoutServer {
 public:
  explicit LayoutServer(const DatasetRegistry& registry);
  ~LayoutServer();
  LayoutServer(const LayoutServer&) = delete;
  LayoutServer& operator=(const LayoutServer&) = delete;

  // Port 0 picks a free port. Returns the bound port, or -1 on failure.
  int bind(const std::string& host, int port);
  // Serves until stop(); call after bind().
  bool run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace trellis::service
