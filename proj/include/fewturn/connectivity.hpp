#pragma once

#include <span>
#include <string>
#include <vector>

#include "fewturn/ids.hpp"
#include "fewturn/natural_roads.hpp"
#include "fewturn/network.hpp"

namespace fewturn {

struct RoadLink {
  RoadId neighbor;
  std::vector<JunctionId> shared;  // ascending

  friend bool operator==(const RoadLink&, const RoadLink&) = default;
};

/// Unit-weight connectivity graph: one node per road, one link per pair of
/// roads meeting at one or more junctions.
class RoadGraph {
 public:
  RoadGraph() = default;

  /// Takes prepared adjacency lists; checks symmetry, ordering and the absence
  /// of self-links.
  RoadGraph(RoadSetKind kind, std::vector<std::vector<RoadLink>> adjacency);

  RoadSetKind kind() const { return kind_; }
  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t link_count() const { return link_count_; }
  std::span<const RoadLink> neighbors(RoadId r) const { return adjacency_.at(r.index()); }

  /// Junctions shared by two roads; empty when they are not adjacent.
  std::span<const JunctionId> shared_junctions(RoadId a, RoadId b) const;
  bool adjacent(RoadId a, RoadId b) const { return !shared_junctions(a, b).empty(); }

  /// `roadA roadB junction_count` per link (roadA < roadB), ascending.
  std::string edge_list() const;

  friend bool operator==(const RoadGraph&, const RoadGraph&) = default;

 private:
  RoadSetKind kind_ = RoadSetKind::unsplit;
  std::vector<std::vector<RoadLink>> adjacency_;
  std::size_t link_count_ = 0;
};

RoadGraph build_connectivity_graph(const RoadSet& rs, const RoadNetwork& net);

}  // namespace fewturn
