#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "trellis/layout_service.hpp"

using namespace trellis;
using namespace trellis::service;

namespace {
DatasetRegistry registry_with(std::size_t n) {
  DatasetRegistry r;
  Dataset d = generate_synthetic(SyntheticKind::gaussian_clusters, n, 7);
  d.name = "clusters";
  r.add(std::move(d));
  return r;
}

const char* kRequest =
    R"({"dataset": "clusters", "viewport": {"x": 0, "y": 0, "scale": 1},
        "view": {"width": 770, "height": 840}, "label": {"width": 150, "height": 12}})";
}  // namespace

TEST_CASE("layout request matches direct labeling") {
  const DatasetRegistry reg = registry_with(2000);
  const Response r = handle_layout(reg, kRequest);
  REQUIRE(r.status == 200);
  const auto body = nlohmann::json::parse(r.body);
  CHECK(body["dataset"] == "clusters");
  CHECK(body.contains("elapsed_ms"));
  const Dataset& d = *reg.find("clusters");
  const Viewport v{770, 840, {}, 1};
  const Layout direct = place_labels(project(d.features, v), v, LabelDims{150, 12});
  CHECK(layouts_match(layout_from_json(body), direct));
}

TEST_CASE("identical concurrent requests give identical placements") {
  const DatasetRegistry reg = registry_with(3000);
  Response a, b;
  std::thread t1([&] { a = handle_layout(reg, kRequest); });
  std::thread t2([&] { b = handle_layout(reg, kRequest); });
  t1.join();
  t2.join();
  REQUIRE(a.status == 200);
  CHECK(layouts_match(layout_from_json(nlohmann::json::parse(a.body)),
                      layout_from_json(nlohmann::json::parse(b.body))));
}

TEST_CASE("request errors") {
  const DatasetRegistry reg = registry_with(10);
  const Response unknown = handle_layout(
      reg, R"({"dataset": "nope", "view": {"width": 10, "height": 10}, "label": {"width": 1, "height": 1}})");
  CHECK(unknown.status == 404);
  CHECK(nlohmann::json::parse(unknown.body)["error"].get<std::string>().find("nope") != std::string::npos);
  CHECK(handle_layout(reg, "{").status == 400);
  CHECK(handle_layout(reg, "[]").status == 400);
  CHECK(handle_layout(reg, R"({"dataset": "clusters", "view": {"width": 10, "height": 10},
                               "label": {"width": 0, "height": 1}})").status == 400);
  CHECK(handle_layout(reg, R"({"dataset": "clusters", "viewport": {"scale": -1},
                               "view": {"width": 10, "height": 10},
                               "label": {"width": 1, "height": 1}})").status == 400);
  CHECK(handle_layout(reg, R"({"dataset": "clusters", "view": {"width": 10, "height": 10},
                               "label": {"width": 1, "height": 1}, "config": {"bogus": 1}})").status == 400);
}

TEST_CASE("inline features and config") {
  const DatasetRegistry reg;
  const Response r = handle_layout(reg, R"({"features": [{"id": 1, "x": 5, "y": 5, "priority": 2},
                                                       {"id": 2, "x": 5, "y": 5, "priority": 1}],
                                            "view": {"width": 100, "height": 100},
                                            "label": {"width": 10, "height": 4},
                                            "config": {"prox_wt": 0.25, "base_value_mode": "raw_priority"}})");
  REQUIRE(r.status == 200);
  const auto p = nlohmann::json::parse(r.body)["placements"];
  CHECK(p[0]["corner"] == "LL");
  CHECK(p[1]["corner"] == "UR");
}

TEST_CASE("dataset listing") {
  CHECK(nlohmann::json::parse(handle_list_datasets(DatasetRegistry{}).body)["datasets"].empty());
  const auto dir = std::filesystem::temp_directory_path() / "trellis_service_data";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  save_points(generate_synthetic(SyntheticKind::uniform, 123, 1), dir / "towns.csv");
  std::ofstream(dir / "notes.md") << "ignored";
  DatasetRegistry reg;
  CHECK(reg.load_directory(dir) == 1);
  const auto list = nlohmann::json::parse(handle_list_datasets(reg).body)["datasets"];
  REQUIRE(list.size() == 1);
  CHECK(list[0]["name"] == "towns");
  CHECK(list[0]["count"] == load_points(dir / "towns.csv").features.size());
  CHECK(list[0]["bounds"]["max_x"].get<double>() < 770);
}

TEST_CASE("http round trip") {
  const DatasetRegistry reg = registry_with(500);
  LayoutServer server(reg);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread t([&] { server.run(); });
  httplib::Client client("127.0.0.1", port);
  const auto list = client.Get("/datasets");
  REQUIRE(list);
  CHECK(list->status == 200);
  CHECK(list->get_header_value("Access-Control-Allow-Origin") == "*");
  const auto res = client.Post("/layout", kRequest, "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->has_header("X-Elapsed-Ms"));
  CHECK(nlohmann::json::parse(res->body)["placements"].size() > 0);
  const auto bad = client.Post("/layout", "{", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  server.stop();
  t.join();
}
