#include "fewturn/connectivity.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "fewturn/error.hpp"

namespace fewturn {

RoadGraph::RoadGraph(RoadSetKind kind, std::vector<std::vector<RoadLink>> adjacency)
    : kind_(kind), adjacency_(std::move(adjacency)) {
  std::size_t directed = 0;
  for (std::size_t a = 0; a < adjacency_.size(); ++a) {
    const auto& links = adjacency_[a];
    for (std::size_t i = 0; i < links.size(); ++i) {
      const RoadId b = links[i].neighbor;
      if (b.index() >= adjacency_.size() || b.index() == a) {
        throw Error(Errc::invalid_input, fmt::format("road graph: bad link {} -> {}", a, b.value));
      }
      if (i > 0 && !(links[i - 1].neighbor < b)) {
        throw Error(Errc::invalid_input, fmt::format("road graph: unsorted neighbours of {}", a));
      }
      if (links[i].shared.empty()) throw Error(Errc::invalid_input, "road graph: link without shared junction");
      if (shared_junctions(b, RoadId(a)).size() != links[i].shared.size()) {
        throw Error(Errc::invalid_input, fmt::format("road graph: asymmetric link {} - {}", a, b.value));
      }
      ++directed;
    }
  }
  link_count_ = directed / 2;
}

std::span<const JunctionId> RoadGraph::shared_junctions(RoadId a, RoadId b) const {
  const auto& links = adjacency_.at(a.index());
  auto it = std::lower_bound(links.begin(), links.end(), b,
                             [](const RoadLink& l, RoadId id) { return l.neighbor < id; });
  if (it == links.end() || it->neighbor != b) return {};
  return it->shared;
}

std::string RoadGraph::edge_list() const {
  std::string out;
  for (std::size_t a = 0; a < adjacency_.size(); ++a) {
    for (const auto& link : adjacency_[a]) {
      if (link.neighbor.index() > a) out += fmt::format("{} {} {}\n", a, link.neighbor.value, link.shared.size());
    }
  }
  return out;
}

RoadGraph build_connectivity_graph(const RoadSet& rs, const RoadNetwork& net) {
  rs.check_derived_from(net);
  std::vector<std::map<RoadId, std::vector<JunctionId>>> acc(rs.size());
  for (const Junction& j : net.junctions()) {
    std::vector<RoadId> roads;
    for (const auto& inc : j.incident) roads.push_back(rs.road_of(inc.segment));
    std::sort(roads.begin(), roads.end());
    roads.erase(std::unique(roads.begin(), roads.end()), roads.end());
    for (std::size_t i = 0; i < roads.size(); ++i) {
      for (std::size_t k = i + 1; k < roads.size(); ++k) {
        acc[roads[i].index()][roads[k]].push_back(j.id);
        acc[roads[k].index()][roads[i]].push_back(j.id);
      }
    }
  }
  std::vector<std::vector<RoadLink>> adjacency(rs.size());
  for (std::size_t a = 0; a < acc.size(); ++a) {
    for (auto& [b, shared] : acc[a]) adjacency[a].push_back({b, std::move(shared)});
  }
  return RoadGraph(rs.kind, std::move(adjacency));
}

}  // namespace fewturn
