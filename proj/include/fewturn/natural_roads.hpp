#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fewturn/geometry.hpp"
#include "fewturn/ids.hpp"
#include "fewturn/network.hpp"

namespace fewturn {

struct ChainLink {
  SegmentId segment;
  bool forward = true;  // traversed in digitised direction

  End entry() const { return forward ? End::from : End::to; }
  End exit() const { return forward ? End::to : End::from; }

  friend bool operator==(const ChainLink&, const ChainLink&) = default;
};

/// Maximal run of equally named segments, as an inclusive range of chain
/// positions. An absent name marks an unnamed run.
struct NamedRun {
  std::optional<std::string> name;
  std::size_t first = 0;
  std::size_t last = 0;

  friend bool operator==(const NamedRun&, const NamedRun&) = default;
};

/// A chain of segments joined by good continuity.
struct NaturalRoad {
  RoadId id;
  std::vector<ChainLink> chain;
  /// chain.size() + 1 entries: the junction entered by chain[i] is
  /// junctions[i], the one it leaves by is junctions[i + 1].
  std::vector<JunctionId> junctions;
  Polyline geometry;
  /// Index into geometry.points() of every entry of `junctions`.
  std::vector<std::size_t> junction_vertex;
  std::vector<NamedRun> named_runs;
  bool ring = false;
  double length = 0.0;
  /// For split road sets: the unsplit road this piece came from.
  RoadId parent;
};

enum class RoadSetKind : std::uint8_t { unsplit = 0, split = 1 };

const char* to_string(RoadSetKind kind);

struct RoadSet {
  RoadSetKind kind = RoadSetKind::unsplit;
  std::vector<NaturalRoad> roads;
  std::vector<RoadId> segment_to_road;
  std::uint64_t network_hash = 0;
  double threshold_deg = 45.0;

  std::size_t size() const { return roads.size(); }
  const NaturalRoad& road(RoadId id) const { return roads.at(id.index()); }
  RoadId road_of(SegmentId s) const { return segment_to_road.at(s.index()); }

  /// Throws Errc::mismatch unless this set was built from `net`.
  void check_derived_from(const RoadNetwork& net) const;
};

inline constexpr double kDefaultJoinThresholdDeg = 45.0;

/// Joins segments into natural roads with the every-best-fit rule: at each
/// junction, the pair of segment ends with the smallest deflection is joined
/// first, then the next smallest among still-free ends, and so on while the
/// deflection stays within `threshold_deg`. Ties go to the lexicographically
/// smaller (segment, end) pair.
RoadSet build_natural_roads(const RoadNetwork& net, double threshold_deg = kDefaultJoinThresholdDeg);

/// Deflection between arriving through `a` and leaving through `b` at their
/// common junction.
double join_deflection(const RoadNetwork& net, Incidence a, Incidence b);

/// Split thresholds scaled to the network: 5% of the bounding-box diagonal,
/// ratio 0.2.
SplitParams default_split_params(const RoadNetwork& net);

/// Splits every road at its critical bends. Split points are moved to the
/// nearer junction of the segment holding the critical point, so pieces are
/// always whole-segment sub-chains.
RoadSet split_natural_roads(const RoadNetwork& net, const RoadSet& unsplit, const SplitParams& params);

std::vector<NamedRun> group_named_runs(std::span<const std::optional<std::string>> names);
std::vector<NamedRun> group_named_runs(const RoadNetwork& net, const NaturalRoad& road);

/// Assembles a road from an oriented chain, filling junctions, geometry,
/// named runs and length.
NaturalRoad make_road(const RoadNetwork& net, RoadId id, std::vector<ChainLink> chain, RoadId parent = {});

}  // namespace fewturn
