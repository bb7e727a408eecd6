#include "fewturn/engine.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "fewturn/error.hpp"
#include "fnv.hpp"

namespace fewturn {

struct Engine::State {
  RoadNetwork net;
  RoadSet unsplit;
  RoadSet split;
  RoadGraph g_unsplit;
  RoadGraph g_split;
  double threshold_deg;
  SplitParams split_params;
  std::size_t cap;
  std::uint64_t hash;
  RoutePlanner planner;

  State(RoadNetwork n, RoadSet u, RoadSet s, RoadGraph gu, RoadGraph gs, double threshold, SplitParams sp,
        std::size_t c)
      : net(std::move(n)),
        unsplit(std::move(u)),
        split(std::move(s)),
        g_unsplit(std::move(gu)),
        g_split(std::move(gs)),
        threshold_deg(threshold),
        split_params(sp),
        cap(c),
        hash(0),
        planner(net, unsplit, split, g_unsplit, g_split, cap) {
    detail::Fnv1a h;
    h.add(static_cast<std::uint64_t>(net.content_hash()));
    h.add(threshold_deg);
    h.add(split_params.distance);
    h.add(split_params.ratio);
    h.add(static_cast<std::uint64_t>(cap));
    hash = h.value();
  }
};

Engine::Engine(std::unique_ptr<State> state) : state_(std::move(state)) {}
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;
Engine::~Engine() = default;

Engine Engine::build(RoadNetwork net, const BuildParams& params) {
  if (net.empty()) throw Error(Errc::empty_network, "cannot build an engine on an empty network");
  if (params.sequence_cap == 0) throw Error(Errc::invalid_input, "sequence cap must be positive");
  SplitParams sp = default_split_params(net);
  if (params.split_distance) sp.distance = *params.split_distance;
  if (params.split_ratio) sp.ratio = *params.split_ratio;
  sp.validate();
  RoadSet unsplit = build_natural_roads(net, params.threshold_deg);
  RoadSet split = split_natural_roads(net, unsplit, sp);
  RoadGraph gu = build_connectivity_graph(unsplit, net);
  RoadGraph gs = build_connectivity_graph(split, net);
  return Engine(std::make_unique<State>(std::move(net), std::move(unsplit), std::move(split), std::move(gu),
                                        std::move(gs), params.threshold_deg, sp, params.sequence_cap));
}

const RoadNetwork& Engine::network() const { return state_->net; }
const RoadSet& Engine::unsplit() const { return state_->unsplit; }
const RoadSet& Engine::split() const { return state_->split; }
const RoadGraph& Engine::graph_unsplit() const { return state_->g_unsplit; }
const RoadGraph& Engine::graph_split() const { return state_->g_split; }
const RoutePlanner& Engine::planner() const { return state_->planner; }
double Engine::threshold_deg() const { return state_->threshold_deg; }
const SplitParams& Engine::split_params() const { return state_->split_params; }
std::size_t Engine::sequence_cap() const { return state_->cap; }
std::uint64_t Engine::hash() const { return state_->hash; }
std::string Engine::hash_hex() const { return fmt::format("{:016x}", state_->hash); }

namespace {

constexpr std::array<char, 8> kMagic = {'F', 'E', 'W', 'T', 'U', 'R', 'N', '\0'};
constexpr std::uint32_t kVersion = 1;

enum Tag : std::uint32_t {
  kParams = 0x4d524150,     // "PARM"
  kNetwork = 0x5754454e,    // "NETW"
  kUnsplit = 0x31534452,    // "RDS1"
  kSplit = 0x32534452,      // "RDS2"
  kGraphU = 0x31465247,     // "GRF1"
  kGraphS = 0x32465247,     // "GRF2"
};

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    u64(bits);
  }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.append(s);
  }
  void raw(std::string_view s) { buf_.append(s); }
  void section(std::uint32_t tag, const Writer& body) {
    u32(tag);
    u64(body.buf_.size());
    buf_.append(body.buf_);
  }
  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : data_(bytes) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(data_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::string_view take(std::size_t n) {
    need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  /// Element count, bounded by the bytes left so corrupt input cannot force a
  /// huge allocation.
  std::uint32_t count(std::size_t min_element_size) {
    const std::uint32_t n = u32();
    if (static_cast<std::uint64_t>(n) * min_element_size > data_.size() - pos_) fail();
    return n;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (n > data_.size() - pos_) fail();
  }
  [[noreturn]] static void fail() { throw Error(Errc::format, "truncated or corrupt container"); }

  std::string_view data_;
  std::size_t pos_ = 0;
};

void put_network(Writer& w, const RoadNetwork& net) {
  const Projection& p = net.projection();
  w.u8(p.geographic ? 1 : 0);
  w.f64(p.lon0);
  w.f64(p.lat0);
  w.u32(static_cast<std::uint32_t>(net.junction_count()));
  for (const Junction& j : net.junctions()) {
    w.f64(j.location.x);
    w.f64(j.location.y);
  }
  w.u32(static_cast<std::uint32_t>(net.segment_count()));
  for (const Segment& s : net.segments()) {
    w.str(s.source_id);
    w.u8(s.name ? 1 : 0);
    if (s.name) w.str(*s.name);
    w.u32(s.from.value);
    w.u32(s.to.value);
    w.u32(static_cast<std::uint32_t>(s.geometry.size()));
    for (const Point& pt : s.geometry.points()) {
      w.f64(pt.x);
      w.f64(pt.y);
    }
  }
}

RoadNetwork get_network(Reader& r) {
  Projection p;
  p.geographic = r.u8() != 0;
  p.lon0 = r.f64();
  p.lat0 = r.f64();
  std::vector<Junction> junctions(r.count(16));
  for (std::size_t j = 0; j < junctions.size(); ++j) {
    junctions[j].id = JunctionId(static_cast<std::uint32_t>(j));
    junctions[j].location.x = r.f64();
    junctions[j].location.y = r.f64();
  }
  const std::uint32_t n = r.count(17);
  std::vector<Segment> segments;
  segments.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::string source = r.str();
    std::optional<std::string> name;
    if (r.u8() != 0) name = r.str();
    const JunctionId from(r.u32());
    const JunctionId to(r.u32());
    std::vector<Point> pts(r.count(16));
    for (auto& pt : pts) {
      pt.x = r.f64();
      pt.y = r.f64();
    }
    segments.push_back({SegmentId(i), Polyline(std::move(pts)), std::move(name), std::move(source), from, to});
  }
  return RoadNetwork(std::move(segments), std::move(junctions), p);
}

void put_road_set(Writer& w, const RoadSet& rs) {
  w.u8(static_cast<std::uint8_t>(rs.kind));
  w.f64(rs.threshold_deg);
  w.u64(rs.network_hash);
  w.u32(static_cast<std::uint32_t>(rs.roads.size()));
  for (const NaturalRoad& road : rs.roads) {
    w.u32(road.parent.value);
    w.u32(static_cast<std::uint32_t>(road.chain.size()));
    for (const auto& link : road.chain) {
      w.u32(link.segment.value);
      w.u8(link.forward ? 1 : 0);
    }
  }
}

RoadSet get_road_set(Reader& r, const RoadNetwork& net, RoadSetKind expected) {
  RoadSet rs;
  const std::uint8_t kind = r.u8();
  if (kind != static_cast<std::uint8_t>(expected)) throw Error(Errc::format, "road set section has the wrong kind");
  rs.kind = expected;
  rs.threshold_deg = r.f64();
  rs.network_hash = r.u64();
  rs.segment_to_road.assign(net.segment_count(), RoadId{});
  const std::uint32_t n = r.count(8);
  for (std::uint32_t i = 0; i < n; ++i) {
    const RoadId parent(r.u32());
    std::vector<ChainLink> chain(r.count(5));
    for (auto& link : chain) {
      link.segment = SegmentId(r.u32());
      link.forward = r.u8() != 0;
      if (link.segment.index() >= net.segment_count() || rs.segment_to_road[link.segment.index()].valid()) {
        throw Error(Errc::format, "road set section does not partition the segments");
      }
      rs.segment_to_road[link.segment.index()] = RoadId(i);
    }
    rs.roads.push_back(make_road(net, RoadId(i), std::move(chain), parent));
  }
  for (RoadId id : rs.segment_to_road) {
    if (!id.valid()) throw Error(Errc::format, "road set section leaves segments unassigned");
  }
  rs.check_derived_from(net);
  return rs;
}

void put_graph(Writer& w, const RoadGraph& g) {
  w.u8(static_cast<std::uint8_t>(g.kind()));
  w.u32(static_cast<std::uint32_t>(g.node_count()));
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto links = g.neighbors(RoadId(static_cast<std::uint32_t>(i)));
    w.u32(static_cast<std::uint32_t>(links.size()));
    for (const auto& link : links) {
      w.u32(link.neighbor.value);
      w.u32(static_cast<std::uint32_t>(link.shared.size()));
      for (JunctionId j : link.shared) w.u32(j.value);
    }
  }
}

RoadGraph get_graph(Reader& r, RoadSetKind expected, std::size_t roads) {
  if (r.u8() != static_cast<std::uint8_t>(expected)) throw Error(Errc::format, "graph section has the wrong kind");
  std::vector<std::vector<RoadLink>> adjacency(r.count(4));
  if (adjacency.size() != roads) throw Error(Errc::format, "graph size does not match its road set");
  for (auto& links : adjacency) {
    links.resize(r.count(8));
    for (auto& link : links) {
      link.neighbor = RoadId(r.u32());
      if (link.neighbor.index() >= roads) throw Error(Errc::format, "graph link to a missing road");
      link.shared.resize(r.count(4));
      for (auto& j : link.shared) j = JunctionId(r.u32());
    }
  }
  try {
    return RoadGraph(expected, std::move(adjacency));
  } catch (const Error& e) {
    throw Error(Errc::format, fmt::format("graph section is inconsistent: {}", e.what()));
  }
}

std::string container(ContainerKind kind, const std::vector<std::pair<std::uint32_t, Writer>>& sections) {
  Writer w;
  w.raw(std::string_view(kMagic.data(), kMagic.size()));
  w.u32(kVersion);
  w.u32(kind == ContainerKind::network ? 1 : 2);
  w.u32(static_cast<std::uint32_t>(sections.size()));
  for (const auto& [tag, body] : sections) w.section(tag, body);
  // Trailing checksum over everything before it, so any corruption is caught
  // even where the payload would still parse.
  detail::Fnv1a h;
  h.add_bytes(w.bytes().data(), w.bytes().size());
  w.u64(h.value());
  return w.bytes();
}

/// Section bodies by tag, after checking the header.
std::vector<std::pair<std::uint32_t, std::string_view>> open_container(const std::string& bytes, ContainerKind kind) {
  const auto actual = container_kind(bytes);
  if (!actual) throw Error(Errc::format, "not a fewturn container");
  if (*actual != kind) {
    throw Error(Errc::format, kind == ContainerKind::network ? "expected a network container, got a snapshot"
                                                             : "expected a snapshot container, got a network");
  }
  Reader r(bytes);
  r.take(kMagic.size());
  const std::uint32_t version = r.u32();
  if (version != kVersion) throw Error(Errc::format, fmt::format("unsupported container version {}", version));
  constexpr std::size_t kHeader = kMagic.size() + 12;
  if (bytes.size() < kHeader + 8) throw Error(Errc::format, "truncated or corrupt container");
  const std::size_t payload = bytes.size() - 8;
  detail::Fnv1a h;
  h.add_bytes(bytes.data(), payload);
  Reader trailer(std::string_view(bytes).substr(payload));
  if (trailer.u64() != h.value()) throw Error(Errc::format, "container checksum mismatch");
  r = Reader(std::string_view(bytes).substr(0, payload));
  r.take(kMagic.size() + 4);
  r.u32();
  std::vector<std::pair<std::uint32_t, std::string_view>> out;
  const std::uint32_t n = r.count(12);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t tag = r.u32();
    const std::uint64_t len = r.u64();
    if (len > bytes.size()) throw Error(Errc::format, "truncated or corrupt container");
    out.emplace_back(tag, r.take(static_cast<std::size_t>(len)));
  }
  if (!r.done()) throw Error(Errc::format, "trailing bytes after the last section");
  return out;
}

std::string_view section(const std::vector<std::pair<std::uint32_t, std::string_view>>& sections, std::uint32_t tag,
                         const char* what) {
  for (const auto& [t, body] : sections) {
    if (t == tag) return body;
  }
  throw Error(Errc::format, fmt::format("container has no {} section", what));
}

template <typename F>
auto read_section(std::string_view body, F&& f) {
  Reader r(body);
  auto value = f(r);
  if (!r.done()) throw Error(Errc::format, "section has trailing bytes");
  return value;
}

}  // namespace

std::optional<ContainerKind> container_kind(const std::string& bytes) {
  if (bytes.size() < kMagic.size() + 8 || std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    return std::nullopt;
  }
  Reader r(std::string_view(bytes).substr(kMagic.size()));
  r.u32();
  switch (r.u32()) {
    case 1: return ContainerKind::network;
    case 2: return ContainerKind::snapshot;
    default: return std::nullopt;
  }
}

std::string write_network(const RoadNetwork& net) {
  Writer body;
  put_network(body, net);
  return container(ContainerKind::network, {{kNetwork, body}});
}

RoadNetwork read_network(const std::string& bytes) {
  const auto sections = open_container(bytes, ContainerKind::network);
  return read_section(section(sections, kNetwork, "network"), get_network);
}

std::string write_snapshot(const Engine& engine) {
  Writer params, net, u, s, gu, gs;
  params.f64(engine.threshold_deg());
  params.f64(engine.split_params().distance);
  params.f64(engine.split_params().ratio);
  params.u64(engine.sequence_cap());
  params.u64(engine.hash());
  put_network(net, engine.network());
  put_road_set(u, engine.unsplit());
  put_road_set(s, engine.split());
  put_graph(gu, engine.graph_unsplit());
  put_graph(gs, engine.graph_split());
  return container(ContainerKind::snapshot,
                   {{kParams, params}, {kNetwork, net}, {kUnsplit, u}, {kSplit, s}, {kGraphU, gu}, {kGraphS, gs}});
}

Engine read_snapshot(const std::string& bytes) {
  const auto sections = open_container(bytes, ContainerKind::snapshot);
  struct Params {
    double threshold;
    SplitParams split;
    std::uint64_t cap;
    std::uint64_t hash;
  };
  const Params params = read_section(section(sections, kParams, "parameter"), [](Reader& r) {
    Params p;
    p.threshold = r.f64();
    p.split.distance = r.f64();
    p.split.ratio = r.f64();
    p.cap = r.u64();
    p.hash = r.u64();
    return p;
  });
  RoadNetwork net = read_section(section(sections, kNetwork, "network"), get_network);
  RoadSet u = read_section(section(sections, kUnsplit, "unsplit road set"),
                           [&](Reader& r) { return get_road_set(r, net, RoadSetKind::unsplit); });
  RoadSet s = read_section(section(sections, kSplit, "split road set"),
                           [&](Reader& r) { return get_road_set(r, net, RoadSetKind::split); });
  RoadGraph gu = read_section(section(sections, kGraphU, "unsplit graph"),
                              [&](Reader& r) { return get_graph(r, RoadSetKind::unsplit, u.size()); });
  RoadGraph gs = read_section(section(sections, kGraphS, "split graph"),
                              [&](Reader& r) { return get_graph(r, RoadSetKind::split, s.size()); });
  params.split.validate();
  auto state = std::make_unique<Engine::State>(std::move(net), std::move(u), std::move(s), std::move(gu), std::move(gs),
                                               params.threshold, params.split, params.cap);
  if (state->hash != params.hash) throw Error(Errc::format, "snapshot hash does not match its contents");
  return Engine(std::move(state));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, fmt::format("cannot write '{}'", path.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io, fmt::format("failed writing '{}'", path.string()));
}

}  // namespace fewturn
