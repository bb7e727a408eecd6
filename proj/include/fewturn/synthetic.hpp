#pragma once

#include <cstdint>
#include <string>

#include "fewturn/network.hpp"

namespace fewturn {

/// Square street grid with jittered junctions and one bend vertex per block
/// side. Streets run along x, avenues along y.
struct PerturbedGridOptions {
  double extent = 60.0;
  double spacing = 5.0;
  double junction_jitter = 0.1;  // fraction of spacing, each axis
  double bend_jitter = 0.1;      // fraction of spacing, across the segment
  std::uint64_t seed = 1;
};

RoadNetwork perturbed_grid(const PerturbedGridOptions& options = {});

/// Small connected network for exhaustive checks: a jittered 3x3 to 4x4
/// lattice, a random spanning tree of lattice edges, then extra lattice edges
/// and cell diagonals up to `max_segments`. Some segments get a bend vertex.
RoadNetwork random_network(std::uint64_t seed, std::size_t max_segments = 30);

/// Edge-list text that load_edge_list reads back into an identical network.
std::string to_edge_list(const RoadNetwork& net);

}  // namespace fewturn
