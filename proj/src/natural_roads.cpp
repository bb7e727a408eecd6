#include "fewturn/natural_roads.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/format.h>

#include "fewturn/error.hpp"

namespace fewturn {

const char* to_string(RoadSetKind kind) { return kind == RoadSetKind::unsplit ? "unsplit" : "split"; }

void RoadSet::check_derived_from(const RoadNetwork& net) const {
  if (network_hash != net.content_hash() || segment_to_road.size() != net.segment_count()) {
    throw Error(Errc::mismatch, fmt::format("{} road set was not derived from this network", to_string(kind)));
  }
}

double join_deflection(const RoadNetwork& net, Incidence a, Incidence b) {
  const Vec2 in = net.segment(a.segment).arrival_direction(a.end);
  const Vec2 out = -net.segment(b.segment).arrival_direction(b.end);
  return deflection_angle(in, out);
}

SplitParams default_split_params(const RoadNetwork& net) {
  SplitParams p;
  p.distance = 0.05 * net.bbox_diagonal();
  if (!(p.distance > 0.0)) p.distance = 1.0;
  p.ratio = 0.2;
  return p;
}

std::vector<NamedRun> group_named_runs(std::span<const std::optional<std::string>> names) {
  std::vector<NamedRun> runs;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!runs.empty() && runs.back().name == names[i]) {
      runs.back().last = i;
    } else {
      runs.push_back({names[i], i, i});
    }
  }
  return runs;
}

std::vector<NamedRun> group_named_runs(const RoadNetwork& net, const NaturalRoad& road) {
  std::vector<std::optional<std::string>> names;
  names.reserve(road.chain.size());
  for (const auto& link : road.chain) names.push_back(net.segment(link.segment).name);
  return group_named_runs(names);
}

NaturalRoad make_road(const RoadNetwork& net, RoadId id, std::vector<ChainLink> chain, RoadId parent) {
  if (chain.empty()) throw Error(Errc::invalid_input, "road with an empty chain");
  std::vector<Point> points;
  std::vector<JunctionId> junctions;
  std::vector<std::size_t> vertex;
  double length = 0.0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const Segment& s = net.segment(chain[i].segment);
    const JunctionId entry = s.junction(chain[i].entry());
    if (i == 0) {
      junctions.push_back(entry);
      vertex.push_back(0);
    } else if (entry != junctions.back()) {
      throw Error(Errc::invalid_input, fmt::format("road {}: chain breaks before segment {}", id.value, s.id.value));
    }
    auto pts = s.geometry.points();
    const std::size_t start = points.empty() ? 0 : 1;
    if (chain[i].forward) {
      for (std::size_t k = start; k < pts.size(); ++k) points.push_back(pts[k]);
    } else {
      for (std::size_t k = start; k < pts.size(); ++k) points.push_back(pts[pts.size() - 1 - k]);
    }
    junctions.push_back(s.junction(chain[i].exit()));
    vertex.push_back(points.size() - 1);
    length += s.length;
  }
  NaturalRoad road{id, std::move(chain), std::move(junctions), Polyline(std::move(points)), std::move(vertex), {},
                   false, length, parent};
  road.ring = road.junctions.front() == road.junctions.back();
  road.named_runs = group_named_runs(net, road);
  return road;
}

namespace {

std::size_t end_slot(Incidence inc) { return inc.segment.index() * 2 + static_cast<std::size_t>(inc.end); }

}  // namespace

RoadSet build_natural_roads(const RoadNetwork& net, double threshold_deg) {
  if (!(threshold_deg >= 0.0) || threshold_deg > 180.0) {
    throw Error(Errc::invalid_input, fmt::format("join threshold {} outside [0, 180]", threshold_deg));
  }
  constexpr double kAngleSlack = 1e-9;

  std::vector<std::optional<Incidence>> partner(net.segment_count() * 2);

  struct Candidate {
    double deflection;
    Incidence a, b;
  };
  for (const Junction& j : net.junctions()) {
    std::vector<Incidence> ends = j.incident;
    std::sort(ends.begin(), ends.end());
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < ends.size(); ++i) {
      for (std::size_t k = i + 1; k < ends.size(); ++k) {
        const double d = join_deflection(net, ends[i], ends[k]);
        if (d <= threshold_deg + kAngleSlack) candidates.push_back({d, ends[i], ends[k]});
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& r) {
      return std::tie(l.deflection, l.a, l.b) < std::tie(r.deflection, r.a, r.b);
    });
    for (const auto& c : candidates) {
      if (partner[end_slot(c.a)] || partner[end_slot(c.b)]) continue;
      partner[end_slot(c.a)] = c.b;
      partner[end_slot(c.b)] = c.a;
    }
  }

  RoadSet rs;
  rs.kind = RoadSetKind::unsplit;
  rs.network_hash = net.content_hash();
  rs.threshold_deg = threshold_deg;
  rs.segment_to_road.assign(net.segment_count(), RoadId{});

  for (const Segment& seed : net.segments()) {
    if (rs.segment_to_road[seed.id.index()].valid()) continue;

    // Walk backwards from the seed to find a free end, or come back round.
    Incidence cursor{seed.id, End::from};
    bool ring = false;
    while (true) {
      const auto& p = partner[end_slot(cursor)];
      if (!p) break;
      cursor = {p->segment, opposite(p->end)};
      if (cursor.segment == seed.id && cursor.end == End::from) {
        ring = true;
        break;
      }
    }

    Incidence start = cursor;  // entry end of the first link
    std::vector<ChainLink> chain;
    auto walk = [&](Incidence entry) {
      std::vector<ChainLink> out;
      Incidence at = entry;
      while (true) {
        out.push_back({at.segment, at.end == End::from});
        const auto& p = partner[end_slot({at.segment, opposite(at.end)})];
        if (!p) break;
        at = *p;
        if (at == entry) break;
      }
      return out;
    };

    if (ring) {
      chain = walk({seed.id, End::from});
    } else {
      chain = walk(start);
      const ChainLink& last = chain.back();
      const Incidence other{last.segment, last.exit()};
      if (other < start) {
        std::reverse(chain.begin(), chain.end());
        for (auto& link : chain) link.forward = !link.forward;
      }
    }

    const RoadId id(rs.roads.size());
    for (const auto& link : chain) rs.segment_to_road[link.segment.index()] = id;
    rs.roads.push_back(make_road(net, id, std::move(chain), id));
  }
  return rs;
}

namespace {

/// Recursive splitting over junction positions [first, last] of one road.
void split_road(const NaturalRoad& road, const std::vector<double>& arc, std::size_t first, std::size_t last,
                const SplitParams& params, std::vector<std::size_t>& cuts) {
  if (last - first < 2) {
    cuts.push_back(last);
    return;
  }
  const auto pts = road.geometry.points();
  const std::size_t v0 = road.junction_vertex[first];
  const std::size_t v1 = road.junction_vertex[last];
  const auto range = pts.subspan(v0, v1 - v0 + 1);
  const MaxOffset m = max_chord_offset(range);
  if (m.index == 0 || !split_condition(m.offset, distance(range.front(), range.back()), params)) {
    cuts.push_back(last);
    return;
  }
  const std::size_t critical = v0 + m.index;

  // Junction positions bracketing the critical vertex.
  const auto it = std::lower_bound(road.junction_vertex.begin() + static_cast<std::ptrdiff_t>(first),
                                   road.junction_vertex.begin() + static_cast<std::ptrdiff_t>(last) + 1, critical);
  const auto hi = static_cast<std::size_t>(it - road.junction_vertex.begin());
  std::size_t choice = hi;
  if (road.junction_vertex[hi] != critical) {
    const std::size_t lo = hi - 1;
    const double to_lo = arc[critical] - arc[road.junction_vertex[lo]];
    const double to_hi = arc[road.junction_vertex[hi]] - arc[critical];
    const bool lo_ok = lo > first;
    const bool hi_ok = hi < last;
    if (lo_ok && (!hi_ok || to_lo <= to_hi)) {
      choice = lo;
    } else if (hi_ok) {
      choice = hi;
    } else {
      cuts.push_back(last);
      return;
    }
  }
  split_road(road, arc, first, choice, params, cuts);
  split_road(road, arc, choice, last, params, cuts);
}

}  // namespace

RoadSet split_natural_roads(const RoadNetwork& net, const RoadSet& unsplit, const SplitParams& params) {
  if (unsplit.kind != RoadSetKind::unsplit) throw Error(Errc::invalid_input, "can only split an unsplit road set");
  unsplit.check_derived_from(net);
  params.validate();

  RoadSet out;
  out.kind = RoadSetKind::split;
  out.network_hash = unsplit.network_hash;
  out.threshold_deg = unsplit.threshold_deg;
  out.segment_to_road.assign(net.segment_count(), RoadId{});

  for (const NaturalRoad& road : unsplit.roads) {
    const auto pts = road.geometry.points();
    std::vector<double> arc(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) arc[i] = arc[i - 1] + distance(pts[i - 1], pts[i]);

    std::vector<std::size_t> cuts{0};
    split_road(road, arc, 0, road.chain.size(), params, cuts);
    for (std::size_t k = 1; k < cuts.size(); ++k) {
      std::vector<ChainLink> sub(road.chain.begin() + static_cast<std::ptrdiff_t>(cuts[k - 1]),
                                 road.chain.begin() + static_cast<std::ptrdiff_t>(cuts[k]));
      const RoadId id(out.roads.size());
      for (const auto& link : sub) out.segment_to_road[link.segment.index()] = id;
      out.roads.push_back(make_road(net, id, std::move(sub), road.id));
    }
  }
  return out;
}

}  // namespace fewturn
