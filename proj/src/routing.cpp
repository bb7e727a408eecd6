#include "fewturn/routing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <tuple>

#include <fmt/format.h>

#include "fewturn/error.hpp"

namespace fewturn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAngleSlack = 1e-9;

/// Strictly shorter, ignoring differences at the level of summation noise.
bool shorter(double candidate, double incumbent) {
  if (!std::isfinite(incumbent)) return candidate < incumbent;
  return candidate < incumbent - 1e-12 * std::max(1.0, std::abs(incumbent));
}

void check_anchor(const RoadNetwork& net, const Anchor& a) {
  if (!a.segment.valid() || a.segment.index() >= net.segment_count()) {
    throw Error(Errc::invalid_input, fmt::format("anchor references unknown segment {}", a.segment.value));
  }
  if (!(a.offset >= 0.0 && a.offset <= 1.0)) {
    throw Error(Errc::invalid_input, fmt::format("anchor offset {} outside [0, 1]", a.offset));
  }
}

/// Partial length of `seg` between the anchor and the end `e`.
double partial_to(const Segment& seg, double offset, End e) {
  return (e == End::from ? offset : 1.0 - offset) * seg.length;
}

PathStep full_step(SegmentId s, bool forward) {
  return forward ? PathStep{s, 0.0, 1.0, true} : PathStep{s, 1.0, 0.0, false};
}

/// Leaves the origin anchor towards end `e`.
PathStep first_step(const Anchor& a, End e) { return {a.segment, a.offset, e == End::to ? 1.0 : 0.0, e == End::to}; }

/// Enters the destination segment through end `e`.
PathStep last_step(const Anchor& a, End e) { return {a.segment, e == End::from ? 0.0 : 1.0, a.offset, e == End::from}; }

PathStep direct_step(const Anchor& from, const Anchor& to) {
  return {from.segment, from.offset, to.offset, to.offset >= from.offset};
}

double end_offset(End e) { return e == End::from ? 0.0 : 1.0; }

template <typename Cost>
struct QueueItem {
  Cost cost;
  std::size_t node;
  bool operator>(const QueueItem& o) const { return std::tie(cost, node) > std::tie(o.cost, o.node); }
};

template <typename Cost>
using MinQueue = std::priority_queue<QueueItem<Cost>, std::vector<QueueItem<Cost>>, std::greater<>>;

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::st: return "ST";
    case Mode::sp: return "SP";
    case Mode::ft: return "FT";
    case Mode::fts: return "FTS";
  }
  return "?";
}

const char* to_lower_string(Mode m) {
  switch (m) {
    case Mode::st: return "st";
    case Mode::sp: return "sp";
    case Mode::ft: return "ft";
    case Mode::fts: return "fts";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view text) {
  for (Mode m : kAllModes) {
    if (text == to_string(m) || text == to_lower_string(m)) return m;
  }
  return std::nullopt;
}

int mode_turns(const Route& route) {
  switch (route.mode) {
    case Mode::st: return route.turns_perceptual;
    case Mode::sp: return route.turns_deflection;
    case Mode::ft:
    case Mode::fts: return route.turns_topological;
  }
  return 0;
}

double PathStep::length(const RoadNetwork& net) const {
  return std::abs(to_offset - from_offset) * net.segment(segment).length;
}

double path_length(const RoadNetwork& net, std::span<const PathStep> path) {
  double total = 0.0;
  for (const auto& s : path) total += s.length(net);
  return total;
}

Located locate(const RoadNetwork& net, const RoadSet& rs, const Point& query) {
  if (net.empty()) throw Error(Errc::empty_network, "cannot locate a point on an empty network");
  Located best;
  best.distance = kInf;
  for (const Segment& s : net.segments()) {
    const auto proj = project_onto_polyline(s.geometry.points(), query);
    if (proj.distance < best.distance - 1e-9) {
      best.distance = proj.distance;
      best.anchor = {s.id, proj.offset};
    }
  }
  best.road = rs.road_of(best.anchor.segment);
  return best;
}

Located locate(const RoadNetwork& net, const RoadSet& rs, SegmentId segment) {
  check_anchor(net, {segment, 0.5});
  return {{segment, 0.5}, rs.road_of(segment), 0.0};
}

std::vector<Anchor> junction_anchors(const RoadNetwork& net, const RoadSet& rs, JunctionId j) {
  auto incident = net.junction(j).incident;
  std::sort(incident.begin(), incident.end());
  std::vector<Anchor> out;
  std::vector<RoadId> seen;
  for (const auto& inc : incident) {
    const RoadId r = rs.road_of(inc.segment);
    if (std::find(seen.begin(), seen.end(), r) != seen.end()) continue;
    seen.push_back(r);
    out.push_back({inc.segment, end_offset(inc.end)});
  }
  return out;
}

int count_turns(std::span<const PathStep> path, const RoadSet& rs) {
  int turns = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i].segment.index() >= rs.segment_to_road.size()) {
      throw Error(Errc::mismatch, fmt::format("path segment {} is not mapped to a road", path[i].segment.value));
    }
    if (i > 0 && rs.road_of(path[i].segment) != rs.road_of(path[i - 1].segment)) ++turns;
  }
  return turns;
}

int count_deflection_turns(const RoadNetwork& net, std::span<const PathStep> path, double threshold_deg) {
  int turns = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Segment& a = net.segment(path[i - 1].segment);
    const Segment& b = net.segment(path[i].segment);
    const End arrive = path[i - 1].forward ? End::to : End::from;
    const End leave = path[i].forward ? End::from : End::to;
    const double d = deflection_angle(a.arrival_direction(arrive), -b.arrival_direction(leave));
    if (d > threshold_deg + kAngleSlack) ++turns;
  }
  return turns;
}

std::vector<RoadId> road_sequence_of(std::span<const PathStep> path, const RoadSet& rs) {
  std::vector<RoadId> out;
  for (const auto& s : path) {
    const RoadId r = rs.road_of(s.segment);
    if (out.empty() || out.back() != r) out.push_back(r);
  }
  return out;
}

std::vector<std::uint32_t> bfs_levels(const RoadGraph& g, RoadId start) {
  std::vector<std::uint32_t> level(g.node_count(), kUnreached);
  if (start.index() >= g.node_count()) throw Error(Errc::invalid_input, "start road outside the graph");
  std::vector<RoadId> frontier{start};
  level[start.index()] = 0;
  for (std::uint32_t depth = 1; !frontier.empty(); ++depth) {
    std::vector<RoadId> next;
    for (RoadId r : frontier) {
      for (const auto& link : g.neighbors(r)) {
        if (level[link.neighbor.index()] == kUnreached) {
          level[link.neighbor.index()] = depth;
          next.push_back(link.neighbor);
        }
      }
    }
    frontier = std::move(next);
  }
  return level;
}

TopologicalDistance shortest_topological_distance(const RoadGraph& g, RoadId start, RoadId end) {
  if (start.index() >= g.node_count() || end.index() >= g.node_count()) {
    throw Error(Errc::invalid_input, "road outside the connectivity graph");
  }
  if (start == end) return {0};
  // Level by level, stopping as soon as the end road is reached.
  std::vector<bool> seen(g.node_count(), false);
  std::vector<RoadId> frontier{start};
  seen[start.index()] = true;
  for (std::uint32_t depth = 1; !frontier.empty(); ++depth) {
    std::vector<RoadId> next;
    for (RoadId r : frontier) {
      for (const auto& link : g.neighbors(r)) {
        if (seen[link.neighbor.index()]) continue;
        if (link.neighbor == end) return {depth};
        seen[link.neighbor.index()] = true;
        next.push_back(link.neighbor);
      }
    }
    frontier = std::move(next);
  }
  throw Error(Errc::unreachable, fmt::format("road {} cannot reach road {}", start.value, end.value));
}

SequenceEnumeration enumerate_fewest_turn_sequences(const RoadGraph& g, RoadId start, RoadId end,
                                                    TopologicalDistance d, std::size_t cap) {
  SequenceEnumeration out;
  if (cap == 0) {
    out.truncated = true;
    return out;
  }
  const auto from_start = bfs_levels(g, start);
  if (from_start.at(end.index()) != d.value) {
    throw Error(Errc::invalid_input,
                fmt::format("{} is not the topological distance between roads {} and {}", d.value, start.value, end.value));
  }
  // Levels from the end prune branches that cannot finish in time.
  const auto from_end = bfs_levels(g, end);

  std::vector<RoadId> current{start};
  std::function<bool(RoadId, std::uint32_t)> descend = [&](RoadId node, std::uint32_t depth) {
    if (depth == d.value) {
      out.sequences.push_back(current);
      return out.sequences.size() < cap;
    }
    for (const auto& link : g.neighbors(node)) {
      const auto v = link.neighbor.index();
      if (from_start[v] != depth + 1 || from_end[v] != d.value - depth - 1) continue;
      current.push_back(link.neighbor);
      const bool more = descend(link.neighbor, depth + 1);
      current.pop_back();
      if (!more) return false;
    }
    return true;
  };
  const bool complete = descend(start, 0);
  if (!complete) {
    // Hitting the cap exactly on the last sequence is still complete.
    std::size_t total = 0;
    std::function<void(RoadId, std::uint32_t)> count = [&](RoadId node, std::uint32_t depth) {
      if (total > cap) return;
      if (depth == d.value) {
        ++total;
        return;
      }
      for (const auto& link : g.neighbors(node)) {
        const auto v = link.neighbor.index();
        if (from_start[v] == depth + 1 && from_end[v] == d.value - depth - 1) count(link.neighbor, depth + 1);
      }
    };
    count(start, 0);
    out.truncated = total > cap;
  }
  return out;
}

namespace {

struct LayerEdge {
  std::size_t to_local;
  SegmentId segment;
  bool forward;
};

/// Road-restricted view used by layered realisation: the junctions of one road
/// and the chain segments between them.
struct Layer {
  std::vector<JunctionId> junctions;  // sorted, unique
  std::vector<std::vector<LayerEdge>> edges;

  std::size_t local(JunctionId j) const {
    auto it = std::lower_bound(junctions.begin(), junctions.end(), j);
    if (it == junctions.end() || *it != j) return std::numeric_limits<std::size_t>::max();
    return static_cast<std::size_t>(it - junctions.begin());
  }
};

Layer make_layer(const RoadNetwork& net, const NaturalRoad& road) {
  Layer layer;
  layer.junctions = road.junctions;
  std::sort(layer.junctions.begin(), layer.junctions.end());
  layer.junctions.erase(std::unique(layer.junctions.begin(), layer.junctions.end()), layer.junctions.end());
  layer.edges.resize(layer.junctions.size());
  for (const auto& link : road.chain) {
    const Segment& s = net.segment(link.segment);
    const auto a = layer.local(s.from);
    const auto b = layer.local(s.to);
    layer.edges[a].push_back({b, s.id, true});
    layer.edges[b].push_back({a, s.id, false});
  }
  return layer;
}

struct Pred {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::size_t prev = kNone;  // kNone for a source node
  SegmentId segment;         // invalid for a layer change
  bool forward = true;
};

}  // namespace

Realization realize_route(const RoadNetwork& net, const RoadSet& rs, const RoadGraph& g,
                          std::span<const RoadId> sequence, Anchor from, Anchor to) {
  check_anchor(net, from);
  check_anchor(net, to);
  if (sequence.empty()) throw Error(Errc::invalid_input, "empty road sequence");
  if (rs.road_of(from.segment) != sequence.front() || rs.road_of(to.segment) != sequence.back()) {
    throw Error(Errc::invalid_input, "anchors do not lie on the first and last road of the sequence");
  }
  for (std::size_t i = 1; i < sequence.size(); ++i) {
    if (!g.adjacent(sequence[i - 1], sequence[i])) {
      throw Error(Errc::infeasible,
                  fmt::format("roads {} and {} do not meet", sequence[i - 1].value, sequence[i].value));
    }
  }

  const Segment& sa = net.segment(from.segment);
  const Segment& sb = net.segment(to.segment);
  const std::size_t layers = sequence.size();

  std::vector<Layer> views;
  std::vector<std::size_t> base{0};
  views.reserve(layers);
  for (RoadId r : sequence) {
    views.push_back(make_layer(net, rs.road(r)));
    base.push_back(base.back() + views.back().junctions.size());
  }
  const std::size_t total = base.back();
  auto node = [&](std::size_t layer, std::size_t local) { return base[layer] + local; };
  auto layer_of = [&](std::size_t n) {
    return static_cast<std::size_t>(std::upper_bound(base.begin(), base.end(), n) - base.begin()) - 1;
  };

  std::vector<double> dist(total, kInf);
  std::vector<Pred> pred(total);
  MinQueue<double> queue;
  auto seed = [&](End e) {
    const std::size_t n = node(0, views[0].local(sa.junction(e)));
    const double c = partial_to(sa, from.offset, e);
    if (c < dist[n]) {
      dist[n] = c;
      pred[n] = {Pred::kNone, sa.id, e == End::to};
      queue.push({c, n});
    }
  };
  seed(End::from);
  seed(End::to);

  while (!queue.empty()) {
    const auto [d, n] = queue.top();
    queue.pop();
    if (d > dist[n]) continue;
    const std::size_t layer = layer_of(n);
    const std::size_t local = n - base[layer];
    for (const auto& e : views[layer].edges[local]) {
      const std::size_t m = node(layer, e.to_local);
      const double c = d + net.segment(e.segment).length;
      if (c < dist[m]) {
        dist[m] = c;
        pred[m] = {n, e.segment, e.forward};
        queue.push({c, m});
      }
    }
    if (layer + 1 < layers) {
      const JunctionId j = views[layer].junctions[local];
      const auto next_local = views[layer + 1].local(j);
      if (next_local != std::numeric_limits<std::size_t>::max()) {
        const std::size_t m = node(layer + 1, next_local);
        if (d < dist[m]) {
          dist[m] = d;
          pred[m] = {n, SegmentId{}, true};
          queue.push({d, m});
        }
      }
    }
  }

  // Close at the destination anchor.
  double best = kInf;
  std::optional<End> via;  // nullopt: direct along the shared segment
  bool direct = false;
  if (layers == 1 && sa.id == sb.id) {
    best = std::abs(to.offset - from.offset) * sa.length;
    direct = true;
  }
  for (End e : {End::from, End::to}) {
    const auto local = views.back().local(sb.junction(e));
    const double c = dist[node(layers - 1, local)] + partial_to(sb, to.offset, e);
    if (shorter(c, best)) {
      best = c;
      via = e;
      direct = false;
    }
  }
  if (!std::isfinite(best)) {
    throw Error(Errc::infeasible, "no walk realises the road sequence between the anchors");
  }

  Realization out;
  out.distance = best;
  if (direct) {
    out.path.push_back(direct_step(from, to));
    return out;
  }
  std::vector<PathStep> reversed;
  reversed.push_back(last_step(to, *via));
  std::size_t n = node(layers - 1, views.back().local(sb.junction(*via)));
  while (true) {
    const Pred& p = pred[n];
    if (p.prev == Pred::kNone) {
      reversed.push_back(first_step(from, p.forward ? End::to : End::from));
      break;
    }
    if (p.segment.valid()) reversed.push_back(full_step(p.segment, p.forward));
    n = p.prev;
  }
  out.path.assign(reversed.rbegin(), reversed.rend());
  return out;
}

namespace {

Route fewest_turn_over(const RoadNetwork& net, const RoadSet& rs, const RoadGraph& g, const RoadSet& unsplit,
                       Anchor from, Anchor to, std::size_t cap, Mode mode) {
  check_anchor(net, from);
  check_anchor(net, to);
  const RoadId start = rs.road_of(from.segment);
  const RoadId end = rs.road_of(to.segment);
  const TopologicalDistance d = shortest_topological_distance(g, start, end);
  const SequenceEnumeration en = enumerate_fewest_turn_sequences(g, start, end, d, cap);

  Route route;
  route.mode = mode;
  route.distance = kInf;
  route.truncated = en.truncated;
  std::size_t infeasible = 0;
  for (const auto& seq : en.sequences) {
    Realization r;
    try {
      r = realize_route(net, rs, g, seq, from, to);
    } catch (const Error& e) {
      if (e.code() != Errc::infeasible) throw;
      ++infeasible;
      continue;
    }
    ++route.sequences;
    if (shorter(r.distance, route.distance)) {
      route.distance = r.distance;
      route.path = std::move(r.path);
      route.road_sequence = seq;
    }
  }
  if (route.path.empty()) {
    throw Error(Errc::infeasible,
                fmt::format("none of the {} fewest-turn sequences could be realised", infeasible));
  }
  route.turns_topological = static_cast<int>(d.value);
  route.turns_perceptual = count_turns(route.path, unsplit);
  route.turns_deflection = count_deflection_turns(net, route.path, unsplit.threshold_deg);
  return route;
}

Route finish_segment_route(const RoadNetwork& net, const RoadSet& unsplit, Mode mode, std::vector<PathStep> path,
                           double distance) {
  Route route;
  route.mode = mode;
  route.path = std::move(path);
  route.distance = distance;
  route.road_sequence = road_sequence_of(route.path, unsplit);
  route.turns_perceptual = count_turns(route.path, unsplit);
  route.turns_topological = route.turns_perceptual;
  route.turns_deflection = count_deflection_turns(net, route.path, unsplit.threshold_deg);
  return route;
}

}  // namespace

Route fewest_turn_route(const RoadNetwork& net, const RoadSet& unsplit, const RoadGraph& g, Anchor from, Anchor to,
                        std::size_t cap) {
  return fewest_turn_over(net, unsplit, g, unsplit, from, to, cap, Mode::ft);
}

Route fewest_turn_and_shortest_route(const RoadNetwork& net, const RoadSet& unsplit, const RoadSet& split,
                                     const RoadGraph& g_split, Anchor from, Anchor to, std::size_t cap) {
  if (split.kind != RoadSetKind::split) throw Error(Errc::invalid_input, "fewest-turn-and-shortest needs a split road set");
  return fewest_turn_over(net, split, g_split, unsplit, from, to, cap, Mode::fts);
}

Route shortest_path(const RoadNetwork& net, const RoadSet& unsplit, Anchor from, Anchor to) {
  check_anchor(net, from);
  check_anchor(net, to);
  const Segment& sa = net.segment(from.segment);
  const Segment& sb = net.segment(to.segment);

  const std::size_t n = net.junction_count();
  std::vector<double> dist(n, kInf);
  std::vector<Pred> pred(n);
  std::vector<bool> settled(n, false);
  MinQueue<double> queue;
  for (End e : {End::from, End::to}) {
    const auto j = sa.junction(e).index();
    const double c = partial_to(sa, from.offset, e);
    if (c < dist[j]) {
      dist[j] = c;
      pred[j] = {Pred::kNone, sa.id, e == End::to};
      queue.push({c, j});
    }
  }
  std::size_t targets_left = sb.from == sb.to ? 1 : 2;
  while (!queue.empty() && targets_left > 0) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (settled[u]) continue;
    settled[u] = true;
    if (JunctionId(u) == sb.from || JunctionId(u) == sb.to) --targets_left;
    for (const auto& inc : net.junction(JunctionId(u)).incident) {
      const Segment& s = net.segment(inc.segment);
      const auto v = s.junction(opposite(inc.end)).index();
      const double c = d + s.length;
      if (c < dist[v]) {
        dist[v] = c;
        pred[v] = {u, s.id, inc.end == End::from};
        queue.push({c, v});
      }
    }
  }

  double best = kInf;
  std::optional<End> via;
  if (sa.id == sb.id) best = std::abs(to.offset - from.offset) * sa.length;
  for (End e : {End::from, End::to}) {
    const double c = dist[sb.junction(e).index()] + partial_to(sb, to.offset, e);
    if (shorter(c, best)) {
      best = c;
      via = e;
    }
  }
  if (!std::isfinite(best)) {
    throw Error(Errc::unreachable,
                fmt::format("segment {} cannot reach segment {}", sa.id.value, sb.id.value));
  }

  std::vector<PathStep> path;
  if (!via) {
    path.push_back(direct_step(from, to));
  } else {
    std::vector<PathStep> reversed{last_step(to, *via)};
    std::size_t u = sb.junction(*via).index();
    while (true) {
      const Pred& p = pred[u];
      if (p.prev == Pred::kNone) {
        reversed.push_back(first_step(from, p.forward ? End::to : End::from));
        break;
      }
      reversed.push_back(full_step(p.segment, p.forward));
      u = p.prev;
    }
    path.assign(reversed.rbegin(), reversed.rend());
  }
  return finish_segment_route(net, unsplit, Mode::st, std::move(path), best);
}

Route simplest_path(const RoadNetwork& net, const RoadSet& unsplit, Anchor from, Anchor to, double threshold_deg) {
  check_anchor(net, from);
  check_anchor(net, to);
  const Segment& sa = net.segment(from.segment);
  const Segment& sb = net.segment(to.segment);

  // State 2*s + 1: travelling segment s in digitised direction (arriving at
  // its `to` junction); 2*s: travelling it backwards.
  using Cost = std::pair<int, double>;
  const Cost inf{std::numeric_limits<int>::max(), kInf};
  const std::size_t n = net.segment_count() * 2;
  std::vector<Cost> cost(n, inf);
  std::vector<std::size_t> pred(n, Pred::kNone);
  std::vector<bool> settled(n, false);
  MinQueue<Cost> queue;

  auto state = [](SegmentId s, bool forward) { return s.index() * 2 + (forward ? 1 : 0); };
  for (bool fwd : {false, true}) {
    const Cost c{0, partial_to(sa, from.offset, fwd ? End::to : End::from)};
    cost[state(sa.id, fwd)] = c;
    queue.push({c, state(sa.id, fwd)});
  }

  Cost best = inf;
  std::size_t best_state = Pred::kNone;
  End best_entry = End::from;
  if (sa.id == sb.id) best = {0, std::abs(to.offset - from.offset) * sa.length};

  auto turn_cost = [&](const Segment& a, End arrive, const Segment& b, End leave) {
    const double d = deflection_angle(a.arrival_direction(arrive), -b.arrival_direction(leave));
    return d > threshold_deg + kAngleSlack ? 1 : 0;
  };

  while (!queue.empty()) {
    const auto [c, u] = queue.top();
    queue.pop();
    if (settled[u]) continue;
    settled[u] = true;
    if (best.first < c.first || (best.first == c.first && best.second <= c.second)) break;

    const Segment& s = net.segment(SegmentId(u / 2));
    const bool fwd = (u % 2) == 1;
    const End arrive = fwd ? End::to : End::from;
    for (const auto& inc : net.junction(s.junction(arrive)).incident) {
      if (inc.segment == s.id && inc.end == arrive) continue;  // no U-turns
      const Segment& t = net.segment(inc.segment);
      const int turn = turn_cost(s, arrive, t, inc.end);
      if (t.id == sb.id) {
        const Cost at{c.first + turn, c.second + partial_to(sb, to.offset, inc.end)};
        if (at.first < best.first || (at.first == best.first && shorter(at.second, best.second))) {
          best = at;
          best_state = u;
          best_entry = inc.end;
        }
      }
      const std::size_t v = state(t.id, inc.end == End::from);
      const Cost next{c.first + turn, c.second + t.length};
      if (next < cost[v]) {
        cost[v] = next;
        pred[v] = u;
        queue.push({next, v});
      }
    }
  }
  if (best == inf) {
    throw Error(Errc::unreachable, fmt::format("segment {} cannot reach segment {}", sa.id.value, sb.id.value));
  }

  std::vector<PathStep> path;
  if (best_state == Pred::kNone) {
    path.push_back(direct_step(from, to));
  } else {
    std::vector<PathStep> reversed{last_step(to, best_entry)};
    std::size_t u = best_state;
    while (pred[u] != Pred::kNone) {
      reversed.push_back(full_step(SegmentId(u / 2), u % 2 == 1));
      u = pred[u];
    }
    reversed.push_back(first_step(from, u % 2 == 1 ? End::to : End::from));
    path.assign(reversed.rbegin(), reversed.rend());
  }
  const double length = path_length(net, path);
  return finish_segment_route(net, unsplit, Mode::sp, std::move(path), length);
}

RoutePlanner::RoutePlanner(const RoadNetwork& net, const RoadSet& unsplit, const RoadSet& split,
                           const RoadGraph& g_unsplit, const RoadGraph& g_split, std::size_t cap)
    : net_(net), unsplit_(unsplit), split_(split), g_unsplit_(g_unsplit), g_split_(g_split), cap_(cap) {}

Route RoutePlanner::route(Mode mode, Anchor from, Anchor to) const {
  switch (mode) {
    case Mode::st: return shortest_path(net_, unsplit_, from, to);
    case Mode::sp: return simplest_path(net_, unsplit_, from, to, unsplit_.threshold_deg);
    case Mode::ft: return fewest_turn_route(net_, unsplit_, g_unsplit_, from, to, cap_);
    case Mode::fts: return fewest_turn_and_shortest_route(net_, unsplit_, split_, g_split_, from, to, cap_);
  }
  throw Error(Errc::invalid_input, "unknown mode");
}

namespace {

bool better(Mode mode, const Route& a, const Route& b) {
  switch (mode) {
    case Mode::st:
      if (shorter(a.distance, b.distance)) return true;
      if (shorter(b.distance, a.distance)) return false;
      return a.turns_perceptual < b.turns_perceptual;
    case Mode::sp:
      if (a.turns_deflection != b.turns_deflection) return a.turns_deflection < b.turns_deflection;
      return shorter(a.distance, b.distance);
    case Mode::ft:
    case Mode::fts:
      if (a.turns_topological != b.turns_topological) return a.turns_topological < b.turns_topological;
      return shorter(a.distance, b.distance);
  }
  return false;
}

}  // namespace

Route RoutePlanner::route(Mode mode, std::span<const Anchor> from, std::span<const Anchor> to) const {
  std::optional<Route> best;
  std::optional<Error> failure;
  for (const Anchor& a : from) {
    for (const Anchor& b : to) {
      try {
        Route r = route(mode, a, b);
        if (!best || better(mode, r, *best)) best = std::move(r);
      } catch (const Error& e) {
        if (e.code() != Errc::unreachable && e.code() != Errc::infeasible) throw;
        if (!failure) failure = e;
      }
    }
  }
  if (best) return *best;
  if (failure) throw *failure;
  throw Error(Errc::invalid_input, "no candidate anchors");
}

Route RoutePlanner::route_between_junctions(Mode mode, JunctionId from, JunctionId to) const {
  const auto a = junction_anchors(net_, road_set(mode), from);
  const auto b = junction_anchors(net_, road_set(mode), to);
  return route(mode, a, b);
}

std::vector<Anchor> RoutePlanner::candidates(Mode mode, const Point& p, double* snap_distance) const {
  const RoadSet& rs = road_set(mode);
  const Located loc = locate(net_, rs, p);
  if (snap_distance) *snap_distance = loc.distance;
  const Segment& s = net_.segment(loc.anchor.segment);
  if (loc.anchor.offset == 0.0) return junction_anchors(net_, rs, s.from);
  if (loc.anchor.offset == 1.0) return junction_anchors(net_, rs, s.to);
  return {loc.anchor};
}

}  // namespace fewturn
