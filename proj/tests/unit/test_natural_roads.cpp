#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fewturn/error.hpp"
#include "fewturn/natural_roads.hpp"
#include "fewturn/synthetic.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace fewturn;

namespace {

using Join = std::pair<Incidence, Incidence>;

// Joins implied by the road chains, grouped by junction.
std::map<std::uint32_t, std::vector<Join>> chain_joins(const RoadSet& rs) {
  std::map<std::uint32_t, std::vector<Join>> out;
  auto add = [&](JunctionId j, Incidence a, Incidence b) {
    out[j.value].push_back(std::minmax(a, b));
  };
  for (const NaturalRoad& road : rs.roads) {
    for (std::size_t i = 0; i + 1 < road.chain.size(); ++i) {
      add(road.junctions[i + 1], {road.chain[i].segment, road.chain[i].exit()},
          {road.chain[i + 1].segment, road.chain[i + 1].entry()});
    }
    if (road.ring) {
      add(road.junctions.back(), {road.chain.back().segment, road.chain.back().exit()},
          {road.chain.front().segment, road.chain.front().entry()});
    }
  }
  for (auto& [j, v] : out) std::sort(v.begin(), v.end());
  return out;
}

void expect_matches_oracle(const RoadNetwork& net, double threshold) {
  const RoadSet rs = build_natural_roads(net, threshold);
  const auto got = chain_joins(rs);
  for (const Junction& j : net.junctions()) {
    const auto want = oracle::best_fit_joins(net, j.id, threshold);
    const auto it = got.find(j.id.value);
    const std::vector<Join> have = it == got.end() ? std::vector<Join>{} : it->second;
    EXPECT_EQ(have, want) << "junction " << j.id.value;
  }
}

void expect_partition(const RoadNetwork& net, const RoadSet& rs) {
  std::vector<int> seen(net.segment_count(), 0);
  for (const NaturalRoad& road : rs.roads) {
    ASSERT_EQ(road.junctions.size(), road.chain.size() + 1);
    double len = 0.0;
    for (std::size_t i = 0; i < road.chain.size(); ++i) {
      const Segment& s = net.segment(road.chain[i].segment);
      ++seen[s.id.index()];
      EXPECT_EQ(rs.road_of(s.id), road.id);
      EXPECT_EQ(s.junction(road.chain[i].entry()), road.junctions[i]);
      EXPECT_EQ(s.junction(road.chain[i].exit()), road.junctions[i + 1]);
      len += s.length;
    }
    EXPECT_NEAR(road.length, len, 1e-9 * std::max(1.0, len));
    EXPECT_NEAR(polyline_length(road.geometry), len, 1e-9 * std::max(1.0, len));
  }
  for (int n : seen) EXPECT_EQ(n, 1);
}

}  // namespace

TEST(NaturalRoads, GridHasEightStraightRoads) {
  const RoadNetwork net = test::load_fixture("grid.txt");
  const RoadSet rs = build_natural_roads(net);
  ASSERT_EQ(rs.size(), 8u);
  expect_partition(net, rs);
  for (const NaturalRoad& road : rs.roads) {
    EXPECT_EQ(road.chain.size(), 3u);
    EXPECT_FALSE(road.ring);
    ASSERT_EQ(road.named_runs.size(), 1u);  // one street name per road
    EXPECT_DOUBLE_EQ(road.length, 3.0);
  }
}

TEST(NaturalRoads, WideThresholdClosesTheOuterRing) {
  const RoadNetwork net = test::load_fixture("grid.txt");
  const RoadSet rs = build_natural_roads(net, 90.0);
  EXPECT_EQ(rs.size(), 5u);
  const auto rings = std::count_if(rs.roads.begin(), rs.roads.end(), [](const NaturalRoad& r) { return r.ring; });
  EXPECT_EQ(rings, 1);
  expect_partition(net, rs);
}

TEST(NaturalRoads, ZeroThresholdJoinsOnlyStraightContinuations) {
  const RoadNetwork net = test::load_fixture("grid.txt");
  EXPECT_EQ(build_natural_roads(net, 0.0).size(), 8u);
  const RoadNetwork bend = test::load_fixture("bend.txt");
  EXPECT_GT(build_natural_roads(bend, 0.0).size(), build_natural_roads(bend).size());
}

TEST(NaturalRoads, RejectsThresholdOutsideRange) {
  const RoadNetwork net = test::load_fixture("grid.txt");
  EXPECT_THROW(build_natural_roads(net, -1.0), Error);
  EXPECT_THROW(build_natural_roads(net, 181.0), Error);
}

TEST(NaturalRoads, JoinsMatchBruteForceBestFit) {
  for (const char* name : {"grid.txt", "bend.txt", "sharp.txt", "irregular.geojson"}) {
    SCOPED_TRACE(name);
    expect_matches_oracle(test::load_fixture(name), kDefaultJoinThresholdDeg);
  }
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    SCOPED_TRACE(seed);
    const RoadNetwork net = random_network(seed);
    for (double t : {20.0, 45.0, 70.0}) expect_matches_oracle(net, t);
    expect_partition(net, build_natural_roads(net));
  }
}

TEST(NaturalRoads, RoadsAreDeterministicAndStartAtTheSmallerEnd) {
  const RoadNetwork net = perturbed_grid();
  const RoadSet a = build_natural_roads(net);
  const RoadSet b = build_natural_roads(net);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.roads[i].chain, b.roads[i].chain);
  EXPECT_EQ(a.size(), 26u);
}

TEST(NaturalRoads, JoinDeflection) {
  const RoadNetwork net = test::load_fixture("grid.txt");
  // s0 and s1 continue 5th Street through (1,0)
  EXPECT_NEAR(join_deflection(net, {SegmentId{0u}, End::to}, {SegmentId{1u}, End::from}), 0.0, 1e-12);
}

TEST(NaturalRoads, NamedRuns) {
  const std::vector<std::optional<std::string>> names{"A", "A", std::nullopt, std::nullopt, "B", "A"};
  const auto runs = group_named_runs(names);
  ASSERT_EQ(runs.size(), 4u);
  EXPECT_EQ(runs[0], (NamedRun{"A", 0, 1}));
  EXPECT_EQ(runs[1], (NamedRun{std::nullopt, 2, 3}));
  EXPECT_EQ(runs[2], (NamedRun{"B", 4, 4}));
  EXPECT_EQ(runs[3], (NamedRun{"A", 5, 5}));
}

TEST(NaturalRoads, MismatchedNetworkIsDetected) {
  const RoadNetwork grid = test::load_fixture("grid.txt");
  const RoadNetwork bend = test::load_fixture("bend.txt");
  const RoadSet rs = build_natural_roads(grid);
  try {
    rs.check_derived_from(bend);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::mismatch);
  }
}

TEST(SplitRoads, HairpinSplitsAtTheApex) {
  const RoadNetwork net = test::load_fixture("bend.txt");
  const RoadSet unsplit = build_natural_roads(net);
  ASSERT_EQ(unsplit.size(), 2u);  // the hairpin and the cut-through
  const RoadSet split = split_natural_roads(net, unsplit, {10.0, 0.5});
  expect_partition(net, split);
  std::vector<std::vector<std::string>> pieces;
  for (const NaturalRoad& r : split.roads) {
    std::vector<std::string> ids;
    for (const ChainLink& l : r.chain) ids.push_back(net.segment(l.segment).source_id);
    pieces.push_back(ids);
    EXPECT_EQ(r.parent, unsplit.road_of(r.chain.front().segment));
  }
  const std::vector<std::vector<std::string>> want{{"L1", "L2", "L3"}, {"A1"}, {"A2"}, {"R3", "R2", "R1"}, {"S"}};
  EXPECT_EQ(pieces, want);
}

// Open roads stay whole; a ring has no chord, so it is always cut once.
TEST(SplitRoads, GenerousThresholdsKeepOpenRoadsWhole) {
  for (const char* name : {"grid.txt", "bend.txt", "irregular.geojson"}) {
    const RoadNetwork net = test::load_fixture(name);
    const RoadSet unsplit = build_natural_roads(net);
    const auto rings = static_cast<std::size_t>(
        std::count_if(unsplit.roads.begin(), unsplit.roads.end(), [](const NaturalRoad& r) { return r.ring; }));
    const RoadSet split = split_natural_roads(net, unsplit, {1e9, 1e9});
    EXPECT_EQ(split.size(), unsplit.size() + rings) << name;
  }
  const RoadSet irregular = build_natural_roads(test::load_fixture("irregular.geojson"));
  EXPECT_EQ(std::count_if(irregular.roads.begin(), irregular.roads.end(), [](const NaturalRoad& r) { return r.ring; }), 2);
}

TEST(SplitRoads, PiecesAreContiguousSubChainsOfTheirParent) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RoadNetwork net = random_network(seed);
    const RoadSet unsplit = build_natural_roads(net);
    const RoadSet split = split_natural_roads(net, unsplit, {2.0, 0.1});
    expect_partition(net, split);
    std::map<std::uint32_t, std::vector<ChainLink>> rebuilt;
    for (const NaturalRoad& piece : split.roads) {
      auto& chain = rebuilt[piece.parent.value];
      chain.insert(chain.end(), piece.chain.begin(), piece.chain.end());
    }
    ASSERT_EQ(rebuilt.size(), unsplit.size());
    for (const NaturalRoad& road : unsplit.roads) EXPECT_EQ(rebuilt[road.id.value], road.chain) << seed;
  }
}

TEST(SplitRoads, DefaultParamsScaleWithTheNetwork) {
  const RoadNetwork net = test::load_fixture("grid.txt");
  const SplitParams p = default_split_params(net);
  EXPECT_NEAR(p.distance, 0.05 * std::sqrt(18.0), 1e-12);
  EXPECT_DOUBLE_EQ(p.ratio, 0.2);
}

TEST(SplitRoads, OnlyUnsplitSetsCanBeSplit) {
  const RoadNetwork net = test::load_fixture("bend.txt");
  const RoadSet split = split_natural_roads(net, build_natural_roads(net), {10.0, 0.5});
  EXPECT_THROW(split_natural_roads(net, split, {10.0, 0.5}), Error);
}
