#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fewturn/engine.hpp"
#include "fewturn/error.hpp"
#include "fewturn/routing.hpp"

namespace fewturn {

inline constexpr double kDefaultSnapRadius = 250.0;

/// "x,y" in the network's input coordinates (lon,lat for geographic data).
Point parse_coordinate(std::string_view text);

/// Network-plane position of an input coordinate.
Point to_network_plane(const RoadNetwork& net, const Point& input);

struct RouteAnswer {
  Route route;
  double from_snap = 0.0;  // distance from the query point to the network
  double to_snap = 0.0;
};

/// Routes between two input coordinates. Throws Errc::off_network when either
/// point is farther than `snap_radius` from the network.
RouteAnswer answer_route(const Engine& engine, const Point& from, const Point& to, Mode mode,
                         double snap_radius = kDefaultSnapRadius);

/// JSON body shared by the CLI and the HTTP API.
nlohmann::json route_json(const Engine& engine, const RouteAnswer& answer);

/// Formats a length with up to six decimals and at least one.
std::string format_length(double v);

struct HttpResponse {
  int status = 200;
  std::string body;
};

int http_status(Errc code);

/// Request handling without any transport, so it can be tested directly.
class Service {
 public:
  explicit Service(const Engine& engine, double snap_radius = kDefaultSnapRadius);

  HttpResponse handle(std::string_view path, const std::multimap<std::string, std::string>& query) const;

  const Engine& engine() const { return engine_; }

 private:
  nlohmann::json health() const;
  nlohmann::json route(const std::multimap<std::string, std::string>& query) const;
  nlohmann::json compare(const std::multimap<std::string, std::string>& query) const;

  const Engine& engine_;
  double snap_radius_;
  std::string network_body_;
  std::string roads_unsplit_body_;
  std::string roads_split_body_;
};

/// HTTP transport over a Service. Requests are handled concurrently.
class HttpServer {
 public:
  explicit HttpServer(const Service& service);
  ~HttpServer();

  /// Binds the listening socket; port 0 picks a free one. Returns the port.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fewturn
