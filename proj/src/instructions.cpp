#include "fewturn/instructions.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fewturn/error.hpp"

namespace fewturn {

const char* to_string(TurnDirection t) {
  switch (t) {
    case TurnDirection::left: return "left";
    case TurnDirection::right: return "right";
    case TurnDirection::straight: return "continue";
  }
  return "?";
}

TurnDirection classify_turn(double signed_deflection_deg) {
  if (std::abs(signed_deflection_deg) < kStraightToleranceDeg) return TurnDirection::straight;
  return signed_deflection_deg > 0.0 ? TurnDirection::left : TurnDirection::right;
}

InstructionDocument route_instructions(const Route& route, const RoadSet& rs, const RoadNetwork& net) {
  rs.check_derived_from(net);
  if (route.path.empty()) throw Error(Errc::invalid_input, "route has no path");
  if (road_sequence_of(route.path, rs) != route.road_sequence) {
    throw Error(Errc::mismatch,
                fmt::format("{} route was not computed over the {} road set", to_string(route.mode), to_string(rs.kind)));
  }

  InstructionDocument doc;
  doc.mode = route.mode;
  doc.distance = route.distance;
  for (std::size_t i = 0; i < route.path.size(); ++i) {
    const PathStep& step = route.path[i];
    const Segment& seg = net.segment(step.segment);
    const RoadId road = rs.road_of(step.segment);

    if (doc.roads.empty() || doc.roads.back().road != road) {
      NaturalRoadEntry entry;
      entry.road = road;
      if (i > 0) {
        const PathStep& prev = route.path[i - 1];
        const Vec2 in = net.segment(prev.segment).arrival_direction(prev.forward ? End::to : End::from);
        const Vec2 out = -seg.arrival_direction(step.forward ? End::from : End::to);
        entry.deflection = signed_deflection_angle(in, out);
        entry.turn = classify_turn(entry.deflection);
      }
      doc.roads.push_back(std::move(entry));
    }
    NaturalRoadEntry& entry = doc.roads.back();
    if (entry.named_roads.empty() || entry.named_roads.back().name != seg.name) {
      entry.named_roads.push_back({seg.name, 0.0, {}});
    }
    const double len = step.length(net);
    entry.named_roads.back().segments.push_back({seg.id, seg.source_id, step.from_offset, step.to_offset, len});
    entry.named_roads.back().length += len;
    entry.length += len;
  }
  doc.turns = static_cast<int>(doc.roads.size()) - 1;
  return doc;
}

namespace {

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string to_xml(const InstructionDocument& doc) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format("<route mode=\"{}\" length=\"{}\" turns=\"{}\">\n", to_string(doc.mode), doc.distance, doc.turns);
  for (const auto& road : doc.roads) {
    out += fmt::format("  <naturalRoad id=\"{}\" length=\"{}\"", road.road.value, road.length);
    if (road.turn) out += fmt::format(" turn=\"{}\" deflection=\"{:.3f}\"", to_string(*road.turn), road.deflection);
    out += ">\n";
    for (const auto& named : road.named_roads) {
      out += "    <namedRoad";
      if (named.name) out += fmt::format(" name=\"{}\"", escape(*named.name));
      out += fmt::format(" length=\"{}\">\n", named.length);
      for (const auto& s : named.segments) {
        out += fmt::format("      <segment id=\"{}\" source=\"{}\" from=\"{}\" to=\"{}\" length=\"{}\"/>\n", s.segment.value,
                           escape(s.source_id), s.from_offset, s.to_offset, s.length);
      }
      out += "    </namedRoad>\n";
    }
    out += "  </naturalRoad>\n";
  }
  out += "</route>\n";
  return out;
}

namespace {

nlohmann::json coordinates(const RoadNetwork& net, std::span<const Point> points) {
  auto out = nlohmann::json::array();
  for (const Point& p : points) {
    const auto [x, y] = net.projection().inverse(p);
    out.push_back({x, y});
  }
  return out;
}

nlohmann::json line_feature(nlohmann::json coords, nlohmann::json properties) {
  return {{"type", "Feature"},
          {"geometry", {{"type", "LineString"}, {"coordinates", std::move(coords)}}},
          {"properties", std::move(properties)}};
}

}  // namespace

std::vector<Point> route_points(const Route& route, const RoadNetwork& net) {
  std::vector<Point> out;
  for (const PathStep& step : route.path) {
    for (const Point& p : extract(net.segment(step.segment).geometry.points(), step.from_offset, step.to_offset)) {
      if (out.empty() || !(out.back() == p)) out.push_back(p);
    }
  }
  if (out.size() == 1) out.push_back(out.front());
  return out;
}

nlohmann::json route_geojson(const Route& route, const RoadNetwork& net) {
  auto roads = nlohmann::json::array();
  for (RoadId r : route.road_sequence) roads.push_back(r.value);
  nlohmann::json props = {{"mode", to_string(route.mode)},
                          {"distance", route.distance},
                          {"turns_topological", route.turns_topological},
                          {"turns_perceptual", route.turns_perceptual},
                          {"turns_deflection", route.turns_deflection},
                          {"road_sequence", std::move(roads)},
                          {"truncated", route.truncated}};
  return line_feature(coordinates(net, route_points(route, net)), std::move(props));
}

nlohmann::json network_geojson(const RoadNetwork& net) {
  auto features = nlohmann::json::array();
  for (const Segment& s : net.segments()) {
    nlohmann::json props = {{"segment", s.id.value}, {"source_id", s.source_id}, {"from", s.from.value},
                            {"to", s.to.value},      {"length", s.length}};
    props["name"] = s.name ? nlohmann::json(*s.name) : nlohmann::json(nullptr);
    features.push_back(line_feature(coordinates(net, s.geometry.points()), std::move(props)));
  }
  return {{"type", "FeatureCollection"}, {"crs_note", net.crs_note()}, {"features", std::move(features)}};
}

nlohmann::json roads_geojson(const RoadSet& rs, const RoadNetwork& net) {
  rs.check_derived_from(net);
  auto features = nlohmann::json::array();
  for (const NaturalRoad& road : rs.roads) {
    auto segments = nlohmann::json::array();
    for (const auto& link : road.chain) segments.push_back(link.segment.value);
    nlohmann::json props = {{"road", road.id.value}, {"kind", to_string(rs.kind)}, {"segments", std::move(segments)},
                            {"length", road.length}, {"ring", road.ring}};
    if (rs.kind == RoadSetKind::split) props["parent"] = road.parent.value;
    features.push_back(line_feature(coordinates(net, road.geometry.points()), std::move(props)));
  }
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

}  // namespace fewturn
