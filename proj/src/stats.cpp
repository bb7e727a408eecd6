#include "fewturn/stats.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "fewturn/connectivity.hpp"
#include "fewturn/error.hpp"

namespace fewturn {

NetworkStats network_stats(const RoadNetwork& net, const RoadSet& roads_i, const RoadSet& roads_ii) {
  roads_i.check_derived_from(net);
  roads_ii.check_derived_from(net);

  NetworkStats s;
  s.arcs = net.segment_count();
  s.arcs_x = static_cast<std::size_t>(std::count_if(net.junctions().begin(), net.junctions().end(),
                                                    [](const Junction& j) { return j.degree() >= 2; }));
  s.roads_i = roads_i.size();
  s.roads_ii = roads_ii.size();
  s.roads_i_x = build_connectivity_graph(roads_i, net).link_count();
  s.roads_ii_x = build_connectivity_graph(roads_ii, net).link_count();
  return s;
}

std::string stats_csv_header() { return "network,Arcs,ArcsX,Roads(I),Roads(I)X,Roads(II),Roads(II)X,Roads(I)/Arcs\n"; }

std::string stats_csv_row(const std::string& network_name, const NetworkStats& s) {
  return fmt::format("{},{},{},{},{},{},{},{:.6f}\n", network_name, s.arcs, s.arcs_x, s.roads_i, s.roads_i_x,
                     s.roads_ii, s.roads_ii_x, s.reduction_ratio());
}

}  // namespace fewturn
