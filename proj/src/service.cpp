#include "fewturn/service.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>
#include <httplib.h>

#include "fewturn/instructions.hpp"

namespace fewturn {

namespace {

double parse_number(std::string_view text, std::string_view whole) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw Error(Errc::invalid_input, fmt::format("expected a coordinate 'x,y', got '{}'", whole));
  }
  return v;
}

}  // namespace

Point parse_coordinate(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
    throw Error(Errc::invalid_input, fmt::format("expected a coordinate 'x,y', got '{}'", text));
  }
  return {parse_number(text.substr(0, comma), text), parse_number(text.substr(comma + 1), text)};
}

Point to_network_plane(const RoadNetwork& net, const Point& input) {
  return net.projection().geographic ? net.projection().forward(input.x, input.y) : input;
}

RouteAnswer answer_route(const Engine& engine, const Point& from, const Point& to, Mode mode, double snap_radius) {
  const RoadNetwork& net = engine.network();
  const RoutePlanner& planner = engine.planner();
  RouteAnswer answer;
  const auto a = planner.candidates(mode, to_network_plane(net, from), &answer.from_snap);
  const auto b = planner.candidates(mode, to_network_plane(net, to), &answer.to_snap);
  for (double d : {answer.from_snap, answer.to_snap}) {
    if (d > snap_radius) {
      throw Error(Errc::off_network,
                  fmt::format("query point is {} units from the network (snap radius {})", format_length(d),
                              format_length(snap_radius)));
    }
  }
  answer.route = planner.route(mode, a, b);
  return answer;
}

std::string format_length(double v) {
  std::string s = fmt::format("{:.6f}", v);
  const auto dot = s.find('.');
  while (s.size() > dot + 2 && s.back() == '0') s.pop_back();
  return s;
}

nlohmann::json route_json(const Engine& engine, const RouteAnswer& answer) {
  const Route& r = answer.route;
  const RoadSet& rs = engine.planner().road_set(r.mode);
  auto roads = nlohmann::json::array();
  for (RoadId id : r.road_sequence) roads.push_back(id.value);
  return {{"mode", to_string(r.mode)},
          {"distance", r.distance},
          {"turns", mode_turns(r)},
          {"turns_topological", r.turns_topological},
          {"turns_perceptual", r.turns_perceptual},
          {"turns_deflection", r.turns_deflection},
          {"road_set", to_string(rs.kind)},
          {"road_sequence", std::move(roads)},
          {"truncated", r.truncated},
          {"snap", {{"from", answer.from_snap}, {"to", answer.to_snap}}},
          {"route", route_geojson(r, engine.network())},
          {"instructions", to_xml(route_instructions(r, rs, engine.network()))}};
}

int http_status(Errc code) {
  switch (code) {
    case Errc::invalid_input:
    case Errc::format: return 400;
    case Errc::unreachable:
    case Errc::infeasible: return 404;
    case Errc::off_network: return 422;
    default: return 500;
  }
}

namespace {

nlohmann::json error_json(const Error& e) { return {{"error", to_string(e.code())}, {"detail", e.what()}}; }

const std::string& required(const std::multimap<std::string, std::string>& query, const std::string& key) {
  const auto it = query.find(key);
  if (it == query.end()) throw Error(Errc::invalid_input, fmt::format("missing query parameter '{}'", key));
  if (query.count(key) > 1) throw Error(Errc::invalid_input, fmt::format("query parameter '{}' given twice", key));
  return it->second;
}

Mode mode_param(const std::multimap<std::string, std::string>& query) {
  if (query.find("mode") == query.end()) return Mode::ft;
  const auto m = parse_mode(required(query, "mode"));
  if (!m) throw Error(Errc::invalid_input, fmt::format("unknown mode '{}'", required(query, "mode")));
  return *m;
}

}  // namespace

Service::Service(const Engine& engine, double snap_radius) : engine_(engine), snap_radius_(snap_radius) {
  if (!(snap_radius >= 0.0)) throw Error(Errc::invalid_input, "snap radius must be non-negative");
  network_body_ = network_geojson(engine.network()).dump();
  roads_unsplit_body_ = roads_geojson(engine.unsplit(), engine.network()).dump();
  roads_split_body_ = roads_geojson(engine.split(), engine.network()).dump();
}

nlohmann::json Service::health() const {
  return {{"status", "ok"},
          {"snapshot", engine_.hash_hex()},
          {"segments", engine_.network().segment_count()},
          {"junctions", engine_.network().junction_count()},
          {"roads", engine_.unsplit().size()},
          {"roads_split", engine_.split().size()},
          {"crs", engine_.network().crs_note()}};
}

nlohmann::json Service::route(const std::multimap<std::string, std::string>& query) const {
  const Point from = parse_coordinate(required(query, "from"));
  const Point to = parse_coordinate(required(query, "to"));
  const Mode mode = mode_param(query);
  return route_json(engine_, answer_route(engine_, from, to, mode, snap_radius_));
}

nlohmann::json Service::compare(const std::multimap<std::string, std::string>& query) const {
  const Point from = parse_coordinate(required(query, "from"));
  const Point to = parse_coordinate(required(query, "to"));
  nlohmann::json routes = nlohmann::json::object();
  bool any = false;
  std::optional<Error> last;
  for (Mode m : kAllModes) {
    try {
      routes[to_string(m)] = route_json(engine_, answer_route(engine_, from, to, m, snap_radius_));
      any = true;
    } catch (const Error& e) {
      if (http_status(e.code()) != 404) throw;
      routes[to_string(m)] = error_json(e);
      last = e;
    }
  }
  if (!any && last) throw *last;
  return {{"from", {from.x, from.y}}, {"to", {to.x, to.y}}, {"routes", std::move(routes)}};
}

HttpResponse Service::handle(std::string_view path, const std::multimap<std::string, std::string>& query) const {
  try {
    if (path == "/health") return {200, health().dump()};
    if (path == "/network") return {200, network_body_};
    if (path == "/roads") {
      std::string kind = "unsplit";
      if (query.find("kind") != query.end()) kind = required(query, "kind");
      if (kind == "unsplit") return {200, roads_unsplit_body_};
      if (kind == "split") return {200, roads_split_body_};
      throw Error(Errc::invalid_input, fmt::format("kind must be 'unsplit' or 'split', got '{}'", kind));
    }
    if (path == "/route") return {200, route(query).dump()};
    if (path == "/compare") return {200, compare(query).dump()};
    return {404, nlohmann::json{{"error", "not_found"}, {"detail", fmt::format("no endpoint '{}'", path)}}.dump()};
  } catch (const Error& e) {
    return {http_status(e.code()), error_json(e).dump()};
  }
}

struct HttpServer::Impl {
  explicit Impl(const Service& s) : service(s) {}

  const Service& service;
  httplib::Server server;
};

HttpServer::HttpServer(const Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    std::multimap<std::string, std::string> query(req.params.begin(), req.params.end());
    const HttpResponse r = impl_->service.handle(req.path, query);
    res.status = r.status;
    res.set_content(r.body, "application/json; charset=utf-8");
  };
  for (const char* path : {"/health", "/network", "/roads", "/route", "/compare"}) impl_->server.Get(path, handler);
  impl_->server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) {
      res.set_content(nlohmann::json{{"error", "not_found"}, {"detail", fmt::format("no endpoint '{}'", req.path)}}.dump(),
                      "application/json; charset=utf-8");
    }
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(Errc::io, fmt::format("cannot listen on {}:{}", host, port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace fewturn
