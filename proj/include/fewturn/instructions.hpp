#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fewturn/natural_roads.hpp"
#include "fewturn/network.hpp"
#include "fewturn/routing.hpp"

namespace fewturn {

enum class TurnDirection : std::uint8_t { left, right, straight };

const char* to_string(TurnDirection t);  // "left", "right", "continue"

/// Transitions bending less than this are reported as going straight on.
inline constexpr double kStraightToleranceDeg = 10.0;

/// Left for a counter-clockwise bend, right for clockwise, straight when the
/// bend is under kStraightToleranceDeg.
TurnDirection classify_turn(double signed_deflection_deg);

struct SegmentEntry {
  SegmentId segment;
  std::string source_id;
  double from_offset = 0.0;
  double to_offset = 1.0;
  double length = 0.0;
};

struct NamedRoadEntry {
  std::optional<std::string> name;
  double length = 0.0;
  std::vector<SegmentEntry> segments;
};

struct NaturalRoadEntry {
  RoadId road;
  double length = 0.0;
  /// Absent on the first road.
  std::optional<TurnDirection> turn;
  double deflection = 0.0;  // signed, degrees; 0 on the first road
  std::vector<NamedRoadEntry> named_roads;
};

struct InstructionDocument {
  Mode mode = Mode::st;
  double distance = 0.0;
  int turns = 0;
  std::vector<NaturalRoadEntry> roads;
};

/// Groups the route path by road, then by street name. Throws Errc::mismatch
/// when `rs` is not the road set the route was computed over.
InstructionDocument route_instructions(const Route& route, const RoadSet& rs, const RoadNetwork& net);

/// UTF-8 XML following docs/route_instructions.xsd.
std::string to_xml(const InstructionDocument& doc);

/// LineString feature of the route geometry (geographic input is returned as
/// lon/lat). A zero-length route yields two identical coordinates.
nlohmann::json route_geojson(const Route& route, const RoadNetwork& net);

/// Route points in network coordinates, consecutive duplicates removed.
std::vector<Point> route_points(const Route& route, const RoadNetwork& net);

/// One LineString per segment.
nlohmann::json network_geojson(const RoadNetwork& net);

/// One LineString per road with its id, kind and member segment ids.
nlohmann::json roads_geojson(const RoadSet& rs, const RoadNetwork& net);

}  // namespace fewturn
