#include <gtest/gtest.h>

#include "fewturn/engine.hpp"
#include "fewturn/error.hpp"
#include "fewturn/stats.hpp"
#include "fewturn/synthetic.hpp"
#include "fixtures.hpp"

using namespace fewturn;

namespace {

void expect_same_routes(const Engine& a, const Engine& b) {
  const std::size_t n = a.network().junction_count();
  for (Mode m : kAllModes) {
    for (std::size_t i = 0; i < n; i += 3) {
      for (std::size_t k = 1; k < n; k += 4) {
        if (i == k) continue;
        const Route ra = a.planner().route_between_junctions(m, JunctionId{i}, JunctionId{k});
        const Route rb = b.planner().route_between_junctions(m, JunctionId{i}, JunctionId{k});
        EXPECT_EQ(ra.path, rb.path);
        EXPECT_EQ(ra.distance, rb.distance);
        EXPECT_EQ(ra.road_sequence, rb.road_sequence);
      }
    }
  }
}

}  // namespace

TEST(Engine, BuildResolvesDefaultSplitParams) {
  const Engine e = test::fixture_engine("grid.txt");
  EXPECT_DOUBLE_EQ(e.threshold_deg(), kDefaultJoinThresholdDeg);
  EXPECT_DOUBLE_EQ(e.split_params().distance, default_split_params(e.network()).distance);
  EXPECT_EQ(e.sequence_cap(), kDefaultSequenceCap);
  EXPECT_EQ(e.unsplit().size(), 8u);
  EXPECT_EQ(e.graph_unsplit().link_count(), 16u);
  EXPECT_EQ(e.hash_hex().size(), 16u);
}

TEST(Engine, HashDependsOnParameters) {
  const RoadNetwork net = test::load_fixture("bend.txt");
  const Engine a = Engine::build(net);
  const Engine b = Engine::build(net, test::bend_params());
  BuildParams p;
  p.threshold_deg = 30.0;
  const Engine c = Engine::build(net, p);
  p = {};
  p.sequence_cap = 7;
  const Engine d = Engine::build(net, p);
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_NE(a.hash(), d.hash());
  EXPECT_EQ(a.hash(), Engine::build(net).hash());
}

TEST(Engine, RejectsBadParameters) {
  const RoadNetwork net = test::load_fixture("grid.txt");
  BuildParams p;
  p.sequence_cap = 0;
  EXPECT_THROW(Engine::build(net, p), Error);
  p = {};
  p.split_ratio = -1.0;
  EXPECT_THROW(Engine::build(net, p), Error);
  p = {};
  p.threshold_deg = 200.0;
  EXPECT_THROW(Engine::build(net, p), Error);
}

TEST(Engine, MovedEngineKeepsWorking) {
  Engine a = test::fixture_engine("grid.txt");
  Engine b = std::move(a);
  EXPECT_EQ(b.planner().route_between_junctions(Mode::ft, JunctionId{0u}, JunctionId{15u}).turns_topological, 1);
}

TEST(Snapshot, RoundTripPreservesEverything) {
  for (const char* name : {"grid.txt", "bend.txt", "sharp.txt", "irregular.geojson"}) {
    SCOPED_TRACE(name);
    const Engine e = test::fixture_engine(name, test::bend_params());
    const std::string bytes = write_snapshot(e);
    EXPECT_EQ(container_kind(bytes), ContainerKind::snapshot);
    const Engine back = read_snapshot(bytes);
    EXPECT_EQ(back.hash(), e.hash());
    EXPECT_EQ(back.network().content_hash(), e.network().content_hash());
    EXPECT_EQ(back.network().projection(), e.network().projection());
    EXPECT_EQ(back.graph_unsplit(), e.graph_unsplit());
    EXPECT_EQ(back.graph_split(), e.graph_split());
    EXPECT_EQ(back.unsplit().segment_to_road, e.unsplit().segment_to_road);
    EXPECT_EQ(back.split().segment_to_road, e.split().segment_to_road);
    EXPECT_EQ(network_stats(back.network(), back.unsplit(), back.split()),
              network_stats(e.network(), e.unsplit(), e.split()));
    EXPECT_EQ(write_snapshot(back), bytes);
    expect_same_routes(e, back);
  }
}

TEST(Snapshot, NetworkContainerRoundTrip) {
  const RoadNetwork net = perturbed_grid();
  const std::string bytes = write_network(net);
  EXPECT_EQ(container_kind(bytes), ContainerKind::network);
  const RoadNetwork back = read_network(bytes);
  EXPECT_EQ(back.content_hash(), net.content_hash());
  ASSERT_EQ(back.segment_count(), net.segment_count());
  for (std::size_t i = 0; i < net.segment_count(); ++i) {
    const Segment& a = net.segment(SegmentId{i});
    const Segment& b = back.segment(SegmentId{i});
    EXPECT_EQ(a.geometry, b.geometry);
    EXPECT_EQ(a.name, b.name);
    EXPECT_EQ(a.source_id, b.source_id);
  }
}

TEST(Snapshot, KindsAreNotInterchangeable) {
  const Engine e = test::fixture_engine("grid.txt");
  EXPECT_THROW(read_network(write_snapshot(e)), Error);
  EXPECT_THROW(read_snapshot(write_network(e.network())), Error);
  EXPECT_FALSE(container_kind("hello world").has_value());
  EXPECT_FALSE(container_kind("").has_value());
}

TEST(Snapshot, TruncationIsDetected) {
  const std::string bytes = write_snapshot(test::fixture_engine("bend.txt"));
  for (std::size_t len : {std::size_t{0}, std::size_t{7}, std::size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
    try {
      read_snapshot(bytes.substr(0, len));
      FAIL() << len;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::format) << len;
    }
  }
  EXPECT_THROW(read_snapshot(bytes + "x"), Error);
}

TEST(Snapshot, UnsupportedVersionIsRejected) {
  std::string bytes = write_snapshot(test::fixture_engine("grid.txt"));
  bytes[8] = 9;  // version follows the 8-byte magic
  try {
    read_snapshot(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
  }
}

// Every single-byte corruption must be rejected with an error, never accepted
// silently or allowed to crash.
TEST(Snapshot, EveryByteFlipIsRejected) {
  const std::string bytes = write_snapshot(test::fixture_engine("bend.txt", test::bend_params()));
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    std::string bad = bytes;
    bad[i] = static_cast<char>(bad[i] ^ 0x5a);
    try {
      read_snapshot(bad);
      ++accepted;
      ADD_FAILURE() << "flip at byte " << i << " accepted";
    } catch (const Error&) {
    }
  }
  EXPECT_EQ(accepted, 0u);
}

TEST(Snapshot, Files) {
  test::TempDir dir("snap");
  const Engine e = test::fixture_engine("grid.txt");
  write_file(dir.file("g.snap"), write_snapshot(e));
  EXPECT_EQ(read_snapshot(read_file(dir.file("g.snap"))).hash(), e.hash());
  EXPECT_THROW(read_file(dir.file("missing.snap")), Error);
  EXPECT_THROW(write_file(dir.file("no/such/dir/x.snap"), "x"), Error);
}

TEST(Stats, GridRow) {
  const Engine e = test::fixture_engine("grid.txt");
  const NetworkStats s = network_stats(e.network(), e.unsplit(), e.split());
  EXPECT_EQ(s.arcs, 24u);
  EXPECT_EQ(s.arcs_x, 16u);
  EXPECT_EQ(s.roads_i, 8u);
  EXPECT_EQ(s.roads_i_x, 16u);
  EXPECT_EQ(stats_csv_row("g", s), "g,24,16,8,16,8,16,0.333333\n");
  EXPECT_EQ(stats_csv_header(), "network,Arcs,ArcsX,Roads(I),Roads(I)X,Roads(II),Roads(II)X,Roads(I)/Arcs\n");
}
