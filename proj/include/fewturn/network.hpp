#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fewturn/geometry.hpp"
#include "fewturn/ids.hpp"

namespace fewturn {

/// Local projection applied at ingest. Geographic input is mapped to metres
/// about the data centroid; planar input passes through untouched.
struct Projection {
  bool geographic = false;
  double lon0 = 0.0;
  double lat0 = 0.0;

  static constexpr double earth_radius_m = 6371008.8;

  Point forward(double lon, double lat) const;
  std::pair<double, double> inverse(const Point& p) const;
  std::string note() const;

  friend bool operator==(const Projection&, const Projection&) = default;
};

/// Great-circle distance in metres between two lon/lat positions.
double haversine_m(double lon1, double lat1, double lon2, double lat2);

struct Segment {
  SegmentId id;
  Polyline geometry;
  std::optional<std::string> name;
  std::string source_id;
  JunctionId from;
  JunctionId to;
  bool loop = false;
  double length = 0.0;

  JunctionId junction(End e) const { return e == End::from ? from : to; }

  /// Direction of travel when arriving at the junction at end `e`: the
  /// terminal chord of the geometry, oriented towards that junction.
  Vec2 arrival_direction(End e) const;
};

struct Incidence {
  SegmentId segment;
  End end = End::from;

  friend auto operator<=>(const Incidence&, const Incidence&) = default;
};

struct Junction {
  JunctionId id;
  Point location;
  std::vector<Incidence> incident;

  std::size_t degree() const { return incident.size(); }
};

/// A feature as read from the source, already in planar coordinates.
struct RawFeature {
  std::vector<Point> points;
  std::optional<std::string> name;
  std::string source_id;
};

/// The geometric road graph: junctions joined by polyline segments. Immutable
/// once built; ids are dense and follow input order.
class RoadNetwork {
 public:
  RoadNetwork() = default;

  /// Assembles a network from already-noded parts, checking that every
  /// segment's end points coincide with the junctions it references.
  RoadNetwork(std::vector<Segment> segments, std::vector<Junction> junctions, Projection projection);

  std::span<const Segment> segments() const { return segments_; }
  std::span<const Junction> junctions() const { return junctions_; }
  const Segment& segment(SegmentId id) const { return segments_.at(id.index()); }
  const Junction& junction(JunctionId id) const { return junctions_.at(id.index()); }
  std::size_t segment_count() const { return segments_.size(); }
  std::size_t junction_count() const { return junctions_.size(); }
  bool empty() const { return segments_.empty(); }

  const Projection& projection() const { return projection_; }
  std::string crs_note() const { return projection_.note(); }

  /// Diagonal of the axis-aligned bounding box of all geometry.
  double bbox_diagonal() const;

  /// Component index per junction; components are numbered in order of their
  /// lowest junction id.
  std::vector<std::uint32_t> junction_components() const;
  std::size_t component_count() const;

  /// Stable 64-bit digest over geometry, names and projection.
  std::uint64_t content_hash() const { return hash_; }

 private:
  std::vector<Segment> segments_;
  std::vector<Junction> junctions_;
  Projection projection_;
  std::uint64_t hash_ = 0;
};

enum class CoordinateMode { automatic, planar, geographic };

struct LoadOptions {
  CoordinateMode coordinates = CoordinateMode::automatic;
  double snap_tolerance = 0.0;
};

struct LoadResult {
  RoadNetwork network;
  std::vector<std::string> rejected;  // one diagnostic per dropped feature
};

/// Builds junctions at shared end points (merging end points closer than
/// `snap_tolerance`) and assigns ids in feature order.
LoadResult build_network(std::vector<RawFeature> features, const Projection& projection,
                         double snap_tolerance = 0.0);

/// GeoJSON FeatureCollection of LineString features. In automatic mode the
/// coordinates are taken as lon/lat.
LoadResult load_geojson(const std::string& text, const LoadOptions& options = {});

/// Whitespace-separated edge list: `id x1 y1 x2 y2 ... [name]` per line. `#`
/// starts a comment. In automatic mode coordinates are planar.
LoadResult load_edge_list(const std::string& text, const LoadOptions& options = {});

/// Dispatches on extension: .geojson/.json to GeoJSON, anything else to the
/// edge-list reader.
LoadResult load_network_file(const std::filesystem::path& path, const LoadOptions& options = {});

struct Crossing {
  SegmentId a;
  SegmentId b;
  Point at;
};

struct CloseJunctions {
  JunctionId a;
  JunctionId b;
  double distance = 0.0;
};

struct NodingReport {
  std::vector<Crossing> crossings;             // segments meeting away from a shared junction
  std::vector<CloseJunctions> close_junctions; // distinct junctions nearer than the tolerance

  bool routable() const { return crossings.empty(); }
  bool clean() const { return crossings.empty() && close_junctions.empty(); }
};

NodingReport validate_noding(const RoadNetwork& net, double tolerance);

}  // namespace fewturn
