#pragma once

#include <cstddef>
#include <string>

#include "fewturn/natural_roads.hpp"
#include "fewturn/network.hpp"

namespace fewturn {

/// Size of the geometric and the road-based representation of one network.
struct NetworkStats {
  std::size_t arcs = 0;        // segments
  std::size_t arcs_x = 0;      // junctions joining two or more segment ends
  std::size_t roads_i = 0;     // natural roads before splitting
  std::size_t roads_i_x = 0;   // road pairs sharing a junction
  std::size_t roads_ii = 0;    // natural roads after splitting
  std::size_t roads_ii_x = 0;

  /// roads_i / arcs: how much smaller the road graph is.
  double reduction_ratio() const { return arcs == 0 ? 0.0 : static_cast<double>(roads_i) / static_cast<double>(arcs); }

  friend bool operator==(const NetworkStats&, const NetworkStats&) = default;
};

NetworkStats network_stats(const RoadNetwork& net, const RoadSet& roads_i, const RoadSet& roads_ii);

std::string stats_csv_header();
std::string stats_csv_row(const std::string& network_name, const NetworkStats& s);

}  // namespace fewturn
