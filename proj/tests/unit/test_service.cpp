#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "fewturn/error.hpp"
#include "fewturn/service.hpp"
#include "fixtures.hpp"

using namespace fewturn;
using Query = std::multimap<std::string, std::string>;

namespace {

nlohmann::json body(const HttpResponse& r) { return nlohmann::json::parse(r.body); }

}  // namespace

TEST(Coordinates, Parse) {
  EXPECT_EQ(parse_coordinate("1.5,-2"), (Point{1.5, -2}));
  EXPECT_EQ(parse_coordinate(" 3 , +4 "), (Point{3, 4}));
  EXPECT_EQ(parse_coordinate("1e3,0"), (Point{1000, 0}));
  for (const char* bad : {"", "1", "1,", ",2", "1,2,3", "a,b", "1;2", "nan,1", "1,inf"}) {
    try {
      parse_coordinate(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::invalid_input) << bad;
    }
  }
}

TEST(Coordinates, FormatLength) {
  EXPECT_EQ(format_length(6.0), "6.0");
  EXPECT_EQ(format_length(162.4264), "162.4264");
  EXPECT_EQ(format_length(1.0 / 3.0), "0.333333");
  EXPECT_EQ(format_length(0.0), "0.0");
}

TEST(Coordinates, StatusMapping) {
  EXPECT_EQ(http_status(Errc::invalid_input), 400);
  EXPECT_EQ(http_status(Errc::format), 400);
  EXPECT_EQ(http_status(Errc::unreachable), 404);
  EXPECT_EQ(http_status(Errc::infeasible), 404);
  EXPECT_EQ(http_status(Errc::off_network), 422);
  EXPECT_EQ(http_status(Errc::io), 500);
}

class GridService : public ::testing::Test {
 protected:
  Engine engine = test::fixture_engine("grid.txt");
  Service service{engine, 0.5};
};

TEST_F(GridService, Health) {
  const HttpResponse r = service.handle("/health", {});
  EXPECT_EQ(r.status, 200);
  const auto j = body(r);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["snapshot"], engine.hash_hex());
  EXPECT_EQ(j["segments"], 24);
  EXPECT_EQ(j["roads"], 8);
}

TEST_F(GridService, RouteDefaultsToFewestTurn) {
  const HttpResponse r = service.handle("/route", {{"from", "0,0"}, {"to", "3,3"}});
  ASSERT_EQ(r.status, 200) << r.body;
  const auto j = body(r);
  EXPECT_EQ(j["mode"], "FT");
  EXPECT_EQ(j["turns"], 1);
  EXPECT_DOUBLE_EQ(j["distance"].get<double>(), 6.0);
  EXPECT_EQ(j["road_set"], "unsplit");
  EXPECT_EQ(j["route"]["geometry"]["type"], "LineString");
  EXPECT_EQ(j["instructions"].get<std::string>().rfind("<?xml", 0), 0u);
  EXPECT_DOUBLE_EQ(j["snap"]["from"].get<double>(), 0.0);
}

TEST_F(GridService, RouteEachMode) {
  for (const char* m : {"st", "sp", "ft", "fts", "ST"}) {
    const HttpResponse r = service.handle("/route", {{"from", "0.5,0"}, {"to", "3,2.5"}, {"mode", m}});
    ASSERT_EQ(r.status, 200) << m;
    EXPECT_DOUBLE_EQ(body(r)["distance"].get<double>(), 5.0) << m;
  }
}

TEST_F(GridService, ClientErrors) {
  auto status = [&](const Query& q) { return service.handle("/route", q).status; };
  EXPECT_EQ(status({{"to", "1,1"}}), 400);
  EXPECT_EQ(status({{"from", "0,0"}, {"to", "1,1"}, {"mode", "fast"}}), 400);
  EXPECT_EQ(status({{"from", "0,0"}, {"to", "one,1"}}), 400);
  EXPECT_EQ(status({{"from", "0,0"}, {"from", "1,0"}, {"to", "1,1"}}), 400);
  const HttpResponse off = service.handle("/route", {{"from", "0,0"}, {"to", "9,9"}});
  EXPECT_EQ(off.status, 422);
  EXPECT_EQ(body(off)["error"], "off_network");
  EXPECT_TRUE(body(off).contains("detail"));
  const HttpResponse missing = service.handle("/elsewhere", {});
  EXPECT_EQ(missing.status, 404);
  EXPECT_EQ(body(missing)["error"], "not_found");
}

TEST_F(GridService, CompareReturnsAllModes) {
  const HttpResponse r = service.handle("/compare", {{"from", "0,0"}, {"to", "3,3"}});
  ASSERT_EQ(r.status, 200);
  const auto j = body(r);
  for (const char* m : {"ST", "SP", "FT", "FTS"}) {
    ASSERT_TRUE(j["routes"].contains(m)) << m;
    EXPECT_DOUBLE_EQ(j["routes"][m]["distance"].get<double>(), 6.0);
  }
}

TEST_F(GridService, RoadLayers) {
  EXPECT_EQ(body(service.handle("/roads", {}))["features"].size(), 8u);
  EXPECT_EQ(body(service.handle("/roads", {{"kind", "split"}}))["features"].size(), engine.split().size());
  EXPECT_EQ(service.handle("/roads", {{"kind", "other"}}).status, 400);
  EXPECT_EQ(body(service.handle("/network", {}))["features"].size(), 24u);
}

TEST(Service, UnreachableIs404) {
  const Engine e = Engine::build(load_edge_list("a 0 0 1 0\nb 5 5 6 5\n").network);
  const Service s(e);
  const HttpResponse r = s.handle("/route", {{"from", "0.5,0"}, {"to", "5.5,5"}});
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(body(r)["error"], "unreachable");
  EXPECT_EQ(s.handle("/compare", {{"from", "0.5,0"}, {"to", "5.5,5"}}).status, 404);
}

TEST(Service, GeographicQueriesUseLonLat) {
  const Engine e = test::fixture_engine("irregular.geojson");
  const Service s(e);
  const auto& j0 = e.network().junction(JunctionId{0u}).location;
  const auto& j1 = e.network().junction(JunctionId{7u}).location;
  const auto [lon0, lat0] = e.network().projection().inverse(j0);
  const auto [lon1, lat1] = e.network().projection().inverse(j1);
  const HttpResponse r = s.handle("/route", {{"from", fmt::format("{},{}", lon0, lat0)},
                                             {"to", fmt::format("{},{}", lon1, lat1)}, {"mode", "st"}});
  ASSERT_EQ(r.status, 200) << r.body;
  const auto j = body(r);
  EXPECT_LT(j["snap"]["from"].get<double>(), 1e-6);
  EXPECT_NEAR(j["distance"].get<double>(),
              e.planner().route_between_junctions(Mode::st, JunctionId{0u}, JunctionId{7u}).distance, 1e-6);
  EXPECT_EQ(s.handle("/route", {{"from", "0,0"}, {"to", "1,1"}}).status, 422);
}

TEST(Service, NegativeSnapRadiusIsRejected) {
  const Engine e = test::fixture_engine("grid.txt");
  EXPECT_THROW(Service(e, -1.0), Error);
}

TEST(Http, ServesConcurrentRequests) {
  const Engine e = test::fixture_engine("grid.txt");
  const Service service(e);
  HttpServer server(service);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread loop([&] { server.listen(); });

  httplib::Client probe("127.0.0.1", port);
  bool up = false;
  for (int i = 0; i < 200 && !up; ++i) {
    if (auto r = probe.Get("/health"); r && r->status == 200) up = true;
    else std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  ASSERT_TRUE(up);

  std::vector<std::thread> clients;
  std::atomic<int> good{0};
  for (int t = 0; t < 4; ++t) {
    clients.emplace_back([&] {
      httplib::Client c("127.0.0.1", port);
      for (int i = 0; i < 10; ++i) {
        auto r = c.Get("/route?from=0,0&to=3,3&mode=ft");
        if (r && r->status == 200 && nlohmann::json::parse(r->body)["turns"] == 1) ++good;
      }
    });
  }
  for (auto& c : clients) c.join();
  EXPECT_EQ(good.load(), 40);

  auto bad = probe.Get("/route?from=0,0&to=3,3&mode=nope");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(nlohmann::json::parse(bad->body)["error"], "invalid_input");
  auto missing = probe.Get("/nothing/here");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(nlohmann::json::parse(missing->body)["error"], "not_found");
  EXPECT_NE(missing->get_header_value("Content-Type").find("application/json"), std::string::npos);

  server.stop();
  loop.join();
}
