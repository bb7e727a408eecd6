#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

namespace fewturn::oracle {

namespace {

// Unit vector along the last chord of `s` when arriving at its end `e`.
Vec2 arriving(const RoadNetwork& net, SegmentId s, End e) {
  const auto pts = net.segment(s).geometry.points();
  const Point& a = e == End::to ? pts[pts.size() - 2] : pts[1];
  const Point& b = e == End::to ? pts.back() : pts.front();
  return {b.x - a.x, b.y - a.y};
}

double bend_deg(Vec2 in, Vec2 out) {
  const double c = in.x * out.y - in.y * out.x;
  const double d = in.x * out.x + in.y * out.y;
  return std::abs(std::atan2(c, d)) * 180.0 / std::numbers::pi;
}

struct Walker {
  const RoadNetwork& net;
  const RoadSet& rs;
  double threshold;
  std::vector<PathOptima> out;
  std::vector<bool> on_path;

  // `prev` is the segment just traversed, arriving at `at` through end `prev_end`.
  void step(JunctionId at, SegmentId prev, End prev_end, double dist, int changes, int bends) {
    for (const Incidence& inc : net.junction(at).incident) {
      const Segment& s = net.segment(inc.segment);
      const End far = opposite(inc.end);
      const JunctionId next = s.junction(far);
      if (on_path[next.index()]) continue;

      int c = changes;
      int b = bends;
      if (prev.valid()) {
        if (rs.road_of(prev) != rs.road_of(inc.segment)) ++c;
        const Vec2 in = arriving(net, prev, prev_end);
        const Vec2 leave = arriving(net, inc.segment, inc.end);
        if (bend_deg(in, {-leave.x, -leave.y}) > threshold + 1e-9) ++b;
      }
      const double d = dist + s.length;

      PathOptima& o = out[next.index()];
      ++o.paths;
      o.min_distance = std::min(o.min_distance, d);
      if (std::tie(c, d) < std::tie(o.min_road_changes, o.distance_at_min_changes)) {
        o.min_road_changes = c;
        o.distance_at_min_changes = d;
      }
      if (std::tie(b, d) < std::tie(o.min_bends, o.distance_at_min_bends)) {
        o.min_bends = b;
        o.distance_at_min_bends = d;
      }

      on_path[next.index()] = true;
      step(next, inc.segment, far, d, c, b);
      on_path[next.index()] = false;
    }
  }
};

}  // namespace

std::vector<PathOptima> simple_path_optima(const RoadNetwork& net, const RoadSet& rs, JunctionId source,
                                           double bend_threshold_deg) {
  Walker w{net, rs, bend_threshold_deg, std::vector<PathOptima>(net.junction_count()),
           std::vector<bool>(net.junction_count(), false)};
  w.on_path[source.index()] = true;
  w.step(source, SegmentId{}, End::from, 0.0, 0, 0);
  return std::move(w.out);
}

std::vector<std::vector<std::size_t>> road_hop_distances(const RoadGraph& g) {
  const std::size_t n = g.node_count();
  constexpr std::size_t inf = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (const RoadLink& l : g.neighbors(RoadId{i})) d[i][l.neighbor.index()] = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][k] != inf && d[k][j] != inf) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
  }
  return d;
}

namespace {

void walk(const RoadGraph& g, RoadId end, std::size_t hops, std::vector<RoadId>& cur,
          std::vector<std::vector<RoadId>>& out) {
  if (cur.size() == hops + 1) {
    if (cur.back() == end) out.push_back(cur);
    return;
  }
  std::vector<RoadId> next;
  for (const RoadLink& l : g.neighbors(cur.back())) next.push_back(l.neighbor);
  std::sort(next.begin(), next.end());
  for (RoadId r : next) {
    cur.push_back(r);
    walk(g, end, hops, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<std::vector<RoadId>> road_walks(const RoadGraph& g, RoadId start, RoadId end, std::size_t hops) {
  std::vector<std::vector<RoadId>> out;
  std::vector<RoadId> cur{start};
  walk(g, end, hops, cur, out);
  return out;
}

std::vector<std::pair<Incidence, Incidence>> best_fit_joins(const RoadNetwork& net, JunctionId j, double threshold_deg) {
  std::vector<Incidence> free_ends = net.junction(j).incident;
  std::vector<std::pair<Incidence, Incidence>> joins;
  for (;;) {
    double best = kInf;
    std::size_t bi = 0;
    std::size_t bk = 0;
    for (std::size_t i = 0; i < free_ends.size(); ++i) {
      for (std::size_t k = 0; k < free_ends.size(); ++k) {
        if (i == k) continue;
        Incidence a = free_ends[i];
        Incidence b = free_ends[k];
        if (!(a < b)) continue;
        const Vec2 in = arriving(net, a.segment, a.end);
        const Vec2 out = arriving(net, b.segment, b.end);
        const double d = bend_deg(in, {-out.x, -out.y});
        if (d > threshold_deg + 1e-9) continue;
        const bool better = d < best || (d == best && std::tie(a, b) < std::tie(free_ends[bi], free_ends[bk]));
        if (better) {
          best = d;
          bi = i;
          bk = k;
        }
      }
    }
    if (best == kInf) break;
    joins.emplace_back(free_ends[bi], free_ends[bk]);
    const Incidence a = free_ends[bi];
    const Incidence b = free_ends[bk];
    std::erase(free_ends, a);
    std::erase(free_ends, b);
  }
  std::sort(joins.begin(), joins.end());
  return joins;
}

}  // namespace fewturn::oracle
