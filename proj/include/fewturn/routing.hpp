#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fewturn/connectivity.hpp"
#include "fewturn/geometry.hpp"
#include "fewturn/ids.hpp"
#include "fewturn/natural_roads.hpp"
#include "fewturn/network.hpp"

namespace fewturn {

enum class Mode : std::uint8_t { st, sp, ft, fts };

const char* to_string(Mode m);        // "ST", "SP", "FT", "FTS"
const char* to_lower_string(Mode m);  // "st", ...
std::optional<Mode> parse_mode(std::string_view text);
inline constexpr Mode kAllModes[] = {Mode::st, Mode::sp, Mode::ft, Mode::fts};

/// Position on the network: a segment and an arc-length fraction along its
/// digitised direction.
struct Anchor {
  SegmentId segment;
  double offset = 0.0;

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

struct Located {
  Anchor anchor;
  RoadId road;
  double distance = 0.0;  // from the query point to the network
};

/// Nearest segment to `query` (lowest id within 1e-9) and the projected offset.
Located locate(const RoadNetwork& net, const RoadSet& rs, const Point& query);
/// Midpoint of the given segment.
Located locate(const RoadNetwork& net, const RoadSet& rs, SegmentId segment);

/// One anchor per road of `rs` passing through the junction, using that road's
/// lowest-id incident segment; ordered by segment id.
std::vector<Anchor> junction_anchors(const RoadNetwork& net, const RoadSet& rs, JunctionId j);

/// Part of a segment covered by a route, from `from_offset` to `to_offset`.
/// `forward` is the travel direction relative to the digitised one; it is
/// stored because a zero-length step at a junction still has a heading.
struct PathStep {
  SegmentId segment;
  double from_offset = 0.0;
  double to_offset = 1.0;
  bool forward = true;

  double length(const RoadNetwork& net) const;

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

double path_length(const RoadNetwork& net, std::span<const PathStep> path);

struct Route {
  Mode mode = Mode::st;
  std::vector<RoadId> road_sequence;  // in the road set matching the mode
  std::vector<PathStep> path;
  double distance = 0.0;
  int turns_topological = 0;  // road changes in the mode's own road set
  int turns_perceptual = 0;   // road changes between unsplit natural roads
  int turns_deflection = 0;   // junction transitions bending past the join threshold
  bool truncated = false;     // fewest-turn enumeration hit its cap
  std::size_t sequences = 0;  // fewest-turn sequences realised

  Anchor origin() const { return {path.front().segment, path.front().from_offset}; }
  Anchor destination() const { return {path.back().segment, path.back().to_offset}; }
};

/// The turn count each mode optimises or reports: road changes on unsplit
/// roads for ST, deflection turns for SP, topological distance for FT/FTS.
int mode_turns(const Route& route);

struct TopologicalDistance {
  std::uint32_t value = 0;

  friend auto operator<=>(const TopologicalDistance&, const TopologicalDistance&) = default;
};

inline constexpr std::uint32_t kUnreached = 0xffffffffu;

/// Breadth-first levels from `start`; kUnreached for other components.
std::vector<std::uint32_t> bfs_levels(const RoadGraph& g, RoadId start);

TopologicalDistance shortest_topological_distance(const RoadGraph& g, RoadId start, RoadId end);

struct SequenceEnumeration {
  std::vector<std::vector<RoadId>> sequences;
  bool truncated = false;
};

inline constexpr std::size_t kDefaultSequenceCap = 10000;

/// Every road sequence of length d + 1 from start to end whose breadth-first
/// level rises by one per step, depth-first in ascending road id order.
SequenceEnumeration enumerate_fewest_turn_sequences(const RoadGraph& g, RoadId start, RoadId end,
                                                    TopologicalDistance d, std::size_t cap = kDefaultSequenceCap);

struct Realization {
  std::vector<PathStep> path;
  double distance = 0.0;
};

/// Shortest walk from `from` to `to` that visits the roads of `sequence` in
/// order, changing road only at junctions the consecutive roads share. Throws
/// Errc::infeasible when no such walk exists.
Realization realize_route(const RoadNetwork& net, const RoadSet& rs, const RoadGraph& g,
                          std::span<const RoadId> sequence, Anchor from, Anchor to);

/// Number of places where consecutive path steps lie on different roads.
int count_turns(std::span<const PathStep> path, const RoadSet& rs);

/// Number of junction transitions whose deflection exceeds `threshold_deg`.
int count_deflection_turns(const RoadNetwork& net, std::span<const PathStep> path, double threshold_deg);

/// Consecutive distinct roads visited by the path.
std::vector<RoadId> road_sequence_of(std::span<const PathStep> path, const RoadSet& rs);

Route fewest_turn_route(const RoadNetwork& net, const RoadSet& unsplit, const RoadGraph& g, Anchor from, Anchor to,
                        std::size_t cap = kDefaultSequenceCap);

Route fewest_turn_and_shortest_route(const RoadNetwork& net, const RoadSet& unsplit, const RoadSet& split,
                                     const RoadGraph& g_split, Anchor from, Anchor to,
                                     std::size_t cap = kDefaultSequenceCap);

Route shortest_path(const RoadNetwork& net, const RoadSet& unsplit, Anchor from, Anchor to);

/// Lexicographic (turns, distance) optimum on the segment dual graph, where a
/// junction transition counts as a turn when it deflects by more than
/// `threshold_deg`.
Route simplest_path(const RoadNetwork& net, const RoadSet& unsplit, Anchor from, Anchor to,
                    double threshold_deg = kDefaultJoinThresholdDeg);

/// Bundles the four engines over one network and chooses among several
/// candidate anchors per endpoint (a junction lies on every road through it).
class RoutePlanner {
 public:
  RoutePlanner(const RoadNetwork& net, const RoadSet& unsplit, const RoadSet& split, const RoadGraph& g_unsplit,
               const RoadGraph& g_split, std::size_t cap = kDefaultSequenceCap);

  Route route(Mode mode, Anchor from, Anchor to) const;

  /// Best route over all candidate pairs. ST prefers (distance, turns), SP
  /// (deflection turns, distance), FT/FTS (topological turns, distance); ties
  /// keep the earlier pair.
  Route route(Mode mode, std::span<const Anchor> from, std::span<const Anchor> to) const;

  Route route_between_junctions(Mode mode, JunctionId from, JunctionId to) const;

  /// Candidate anchors for a free point: all roads through a junction when
  /// the point sits on one, else the nearest segment.
  std::vector<Anchor> candidates(Mode mode, const Point& p, double* snap_distance = nullptr) const;

  const RoadNetwork& network() const { return net_; }
  const RoadSet& road_set(Mode mode) const { return mode == Mode::fts ? split_ : unsplit_; }

 private:
  const RoadNetwork& net_;
  const RoadSet& unsplit_;
  const RoadSet& split_;
  const RoadGraph& g_unsplit_;
  const RoadGraph& g_split_;
  std::size_t cap_;
};

}  // namespace fewturn
