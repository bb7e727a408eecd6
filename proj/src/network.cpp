#include "fewturn/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>
#include <json.hpp>

#include "fewturn/error.hpp"
#include "fnv.hpp"

namespace fewturn {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

// Sinusoidal about the centroid meridian: each point is scaled by the cosine
// of its own latitude, which keeps east-west distances exact away from lat0.
Point Projection::forward(double lon, double lat) const {
  if (!geographic) return {lon, lat};
  const double x = earth_radius_m * (lon - lon0) * kDegToRad * std::cos(lat * kDegToRad);
  const double y = earth_radius_m * (lat - lat0) * kDegToRad;
  return {x, y};
}

std::pair<double, double> Projection::inverse(const Point& p) const {
  if (!geographic) return {p.x, p.y};
  const double lat = lat0 + p.y / earth_radius_m / kDegToRad;
  const double c = std::cos(lat * kDegToRad);
  const double lon = lon0 + (c > 0.0 ? p.x / (earth_radius_m * c) / kDegToRad : 0.0);
  return {lon, lat};
}

std::string Projection::note() const {
  if (!geographic) return "planar input, no projection";
  return fmt::format("lon/lat projected to metres (sinusoidal about lon0={:.7f} lat0={:.7f})", lon0, lat0);
}

double haversine_m(double lon1, double lat1, double lon2, double lat2) {
  const double p1 = lat1 * kDegToRad;
  const double p2 = lat2 * kDegToRad;
  const double dp = (lat2 - lat1) * kDegToRad;
  const double dl = (lon2 - lon1) * kDegToRad;
  const double a = std::sin(dp / 2) * std::sin(dp / 2) + std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
  return 2.0 * Projection::earth_radius_m * std::asin(std::min(1.0, std::sqrt(a)));
}

Vec2 Segment::arrival_direction(End e) const {
  const auto pts = geometry.points();
  if (e == End::to) return pts[pts.size() - 1] - pts[pts.size() - 2];
  return pts[0] - pts[1];
}

RoadNetwork::RoadNetwork(std::vector<Segment> segments, std::vector<Junction> junctions, Projection projection)
    : segments_(std::move(segments)), junctions_(std::move(junctions)), projection_(projection) {
  for (std::size_t j = 0; j < junctions_.size(); ++j) {
    if (junctions_[j].id.index() != j) throw Error(Errc::invalid_input, fmt::format("junction {} out of order", j));
    junctions_[j].incident.clear();
  }
  detail::Fnv1a hash;
  hash.add(projection_.geographic);
  hash.add(projection_.lon0);
  hash.add(projection_.lat0);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    Segment& s = segments_[i];
    if (s.id.index() != i) throw Error(Errc::invalid_input, fmt::format("segment {} out of order", i));
    if (!s.from.valid() || !s.to.valid() || s.from.index() >= junctions_.size() ||
        s.to.index() >= junctions_.size()) {
      throw Error(Errc::invalid_input, fmt::format("segment {} references a missing junction", i));
    }
    if (!(s.geometry.front() == junctions_[s.from.index()].location) ||
        !(s.geometry.back() == junctions_[s.to.index()].location)) {
      throw Error(Errc::invalid_input, fmt::format("segment {} end points do not match its junctions", i));
    }
    s.loop = s.from == s.to;
    s.length = polyline_length(s.geometry);
    junctions_[s.from.index()].incident.push_back({s.id, End::from});
    junctions_[s.to.index()].incident.push_back({s.id, End::to});

    for (const Point& p : s.geometry.points()) {
      hash.add(p.x);
      hash.add(p.y);
    }
    hash.add(s.name.value_or(std::string("\x01")));
    hash.add(s.source_id);
  }
  hash_ = hash.value();
}

double RoadNetwork::bbox_diagonal() const {
  if (segments_.empty()) return 0.0;
  double minx = std::numeric_limits<double>::infinity(), miny = minx;
  double maxx = -minx, maxy = -minx;
  for (const auto& s : segments_) {
    for (const Point& p : s.geometry.points()) {
      minx = std::min(minx, p.x);
      miny = std::min(miny, p.y);
      maxx = std::max(maxx, p.x);
      maxy = std::max(maxy, p.y);
    }
  }
  return std::hypot(maxx - minx, maxy - miny);
}

std::vector<std::uint32_t> RoadNetwork::junction_components() const {
  std::vector<std::uint32_t> parent(junctions_.size());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& s : segments_) {
    const auto a = find(s.from.value);
    const auto b = find(s.to.value);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::uint32_t> label(junctions_.size());
  std::unordered_map<std::uint32_t, std::uint32_t> numbering;
  for (std::uint32_t j = 0; j < junctions_.size(); ++j) {
    const auto root = find(j);
    auto [it, inserted] = numbering.try_emplace(root, static_cast<std::uint32_t>(numbering.size()));
    label[j] = it->second;
  }
  return label;
}

std::size_t RoadNetwork::component_count() const {
  const auto labels = junction_components();
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

namespace {

std::vector<Point> drop_repeats(const std::vector<Point>& in) {
  std::vector<Point> out;
  out.reserve(in.size());
  for (const Point& p : in) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  return out;
}

/// Assigns junction ids to end points, merging within a snap tolerance.
class JunctionIndex {
 public:
  explicit JunctionIndex(double tolerance) : tolerance_(tolerance) {}

  std::uint32_t lookup_or_add(const Point& p) {
    if (tolerance_ <= 0.0) {
      auto [it, inserted] = exact_.try_emplace({p.x, p.y}, static_cast<std::uint32_t>(locations_.size()));
      if (inserted) locations_.push_back(p);
      return it->second;
    }
    const auto cx = cell(p.x);
    const auto cy = cell(p.y);
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = grid_.find({cx + dx, cy + dy});
        if (it == grid_.end()) continue;
        for (auto id : it->second) {
          const double d = distance(p, locations_[id]);
          if (d <= tolerance_ && (d < best_d || (d == best_d && id < best))) {
            best = id;
            best_d = d;
          }
        }
      }
    }
    if (best != std::numeric_limits<std::uint32_t>::max()) return best;
    const auto id = static_cast<std::uint32_t>(locations_.size());
    locations_.push_back(p);
    grid_[{cx, cy}].push_back(id);
    return id;
  }

  const Point& location(std::uint32_t id) const { return locations_[id]; }
  std::size_t size() const { return locations_.size(); }

 private:
  std::int64_t cell(double v) const { return static_cast<std::int64_t>(std::floor(v / tolerance_)); }

  double tolerance_;
  std::vector<Point> locations_;
  std::map<std::pair<double, double>, std::uint32_t> exact_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::uint32_t>> grid_;
};

std::string feature_label(const RawFeature& f, std::size_t index) {
  return f.source_id.empty() ? fmt::format("feature #{}", index) : fmt::format("feature '{}'", f.source_id);
}

}  // namespace

LoadResult build_network(std::vector<RawFeature> features, const Projection& projection, double snap_tolerance) {
  LoadResult result;
  JunctionIndex index(snap_tolerance);

  struct Pending {
    std::vector<Point> points;
    RawFeature* source;
    std::uint32_t from, to;
  };
  std::vector<Pending> pending;
  pending.reserve(features.size());

  for (std::size_t i = 0; i < features.size(); ++i) {
    auto& f = features[i];
    auto pts = drop_repeats(f.points);
    if (pts.size() < 2) {
      result.rejected.push_back(fmt::format("{}: fewer than 2 distinct points", feature_label(f, i)));
      continue;
    }
    bool finite = true;
    for (const Point& p : pts) finite = finite && std::isfinite(p.x) && std::isfinite(p.y);
    if (!finite) {
      result.rejected.push_back(fmt::format("{}: non-finite coordinate", feature_label(f, i)));
      continue;
    }
    const auto a = index.lookup_or_add(pts.front());
    const auto b = index.lookup_or_add(pts.back());
    pts.front() = index.location(a);
    pts.back() = index.location(b);
    pts = drop_repeats(pts);
    if (pts.size() < 2 || (a == b && pts.size() < 4)) {
      result.rejected.push_back(fmt::format("{}: collapses to a point after snapping", feature_label(f, i)));
      continue;
    }
    pending.push_back({std::move(pts), &f, a, b});
  }

  if (pending.empty()) {
    throw Error(Errc::empty_network,
                fmt::format("no usable line features ({} rejected)", result.rejected.size()));
  }

  // Junction ids follow first use by a kept segment, so rejected features
  // never leave orphan junctions behind.
  std::vector<std::uint32_t> renumber(index.size(), std::numeric_limits<std::uint32_t>::max());
  std::vector<Junction> junctions;
  auto junction_for = [&](std::uint32_t raw) {
    if (renumber[raw] == std::numeric_limits<std::uint32_t>::max()) {
      renumber[raw] = static_cast<std::uint32_t>(junctions.size());
      junctions.push_back({JunctionId(renumber[raw]), index.location(raw), {}});
    }
    return JunctionId(renumber[raw]);
  };

  std::vector<Segment> segments;
  segments.reserve(pending.size());
  for (auto& p : pending) {
    const auto from = junction_for(p.from);
    const auto to = junction_for(p.to);
    segments.push_back(Segment{SegmentId(segments.size()), Polyline(std::move(p.points)), p.source->name,
                               p.source->source_id, from, to, false, 0.0});
  }
  result.network = RoadNetwork(std::move(segments), std::move(junctions), projection);
  return result;
}

namespace {

Projection centroid_projection(const std::vector<std::vector<std::pair<double, double>>>& lines) {
  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  for (const auto& line : lines) {
    for (const auto& [lon, lat] : line) {
      sx += lon;
      sy += lat;
      ++n;
    }
  }
  Projection proj;
  proj.geographic = true;
  if (n > 0) {
    proj.lon0 = sx / static_cast<double>(n);
    proj.lat0 = sy / static_cast<double>(n);
  }
  return proj;
}

bool looks_geographic(const std::vector<std::vector<std::pair<double, double>>>& lines) {
  for (const auto& line : lines) {
    for (const auto& [x, y] : line) {
      if (std::abs(x) > 180.0 || std::abs(y) > 90.0) return false;
    }
  }
  return true;
}

LoadResult finish_load(std::vector<std::vector<std::pair<double, double>>> coords, std::vector<RawFeature> features,
                       bool geographic, const LoadOptions& options) {
  Projection proj;
  if (geographic) proj = centroid_projection(coords);
  for (std::size_t i = 0; i < features.size(); ++i) {
    features[i].points.clear();
    for (const auto& [x, y] : coords[i]) features[i].points.push_back(proj.forward(x, y));
  }
  return build_network(std::move(features), proj, options.snap_tolerance);
}

std::string json_id(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return fmt::format("{}", v.get<double>());
  return {};
}

}  // namespace

LoadResult load_geojson(const std::string& text, const LoadOptions& options) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::format, fmt::format("GeoJSON parse error: {}", e.what()));
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
      !doc["features"].is_array()) {
    throw Error(Errc::format, "expected a GeoJSON FeatureCollection");
  }

  std::vector<std::vector<std::pair<double, double>>> coords;
  std::vector<RawFeature> features;
  std::vector<std::string> rejected;

  const auto& list = doc["features"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& f = list[i];
    RawFeature raw;
    if (f.contains("id")) raw.source_id = json_id(f["id"]);
    if (f.contains("properties") && f["properties"].is_object()) {
      const auto& props = f["properties"];
      if (props.contains("id")) raw.source_id = json_id(props["id"]);
      if (props.contains("name") && props["name"].is_string()) raw.name = props["name"].get<std::string>();
    }
    const std::string label = raw.source_id.empty() ? fmt::format("feature #{}", i) : raw.source_id;
    if (!f.contains("geometry") || !f["geometry"].is_object()) {
      rejected.push_back(fmt::format("{}: missing geometry", label));
      continue;
    }
    const auto& geom = f["geometry"];
    const std::string type = geom.value("type", "");
    std::vector<nlohmann::json> parts;
    if (type == "LineString") {
      parts.push_back(geom["coordinates"]);
    } else if (type == "MultiLineString") {
      for (const auto& part : geom["coordinates"]) parts.push_back(part);
    } else {
      rejected.push_back(fmt::format("{}: unsupported geometry type '{}'", label, type));
      continue;
    }
    for (std::size_t k = 0; k < parts.size(); ++k) {
      std::vector<std::pair<double, double>> line;
      bool ok = parts[k].is_array();
      if (ok) {
        for (const auto& c : parts[k]) {
          if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
            ok = false;
            break;
          }
          line.emplace_back(c[0].get<double>(), c[1].get<double>());
        }
      }
      if (!ok) {
        rejected.push_back(fmt::format("{}: malformed coordinates", label));
        continue;
      }
      RawFeature piece = raw;
      if (parts.size() > 1) piece.source_id = fmt::format("{}#{}", raw.source_id, k);
      coords.push_back(std::move(line));
      features.push_back(std::move(piece));
    }
  }

  if (features.empty()) {
    throw Error(Errc::empty_network, fmt::format("no line features in input ({} rejected)", rejected.size()));
  }

  bool geographic = true;
  if (options.coordinates == CoordinateMode::planar) geographic = false;
  if (options.coordinates == CoordinateMode::automatic) geographic = looks_geographic(coords);

  auto result = finish_load(std::move(coords), std::move(features), geographic, options);
  result.rejected.insert(result.rejected.begin(), rejected.begin(), rejected.end());
  return result;
}

LoadResult load_edge_list(const std::string& text, const LoadOptions& options) {
  std::vector<std::vector<std::pair<double, double>>> coords;
  std::vector<RawFeature> features;
  std::vector<std::string> rejected;

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string id;
    if (!(tokens >> id)) continue;

    std::vector<double> numbers;
    std::string name;
    std::string tok;
    while (tokens >> tok) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec == std::errc() && ptr == tok.data() + tok.size()) {
        numbers.push_back(v);
        continue;
      }
      std::string rest;
      std::getline(tokens, rest);
      name = tok + rest;
      while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
      break;
    }
    if (numbers.size() % 2 != 0 || numbers.size() < 4) {
      rejected.push_back(fmt::format("line {} ('{}'): expected an even number (>= 4) of coordinates, got {}", line_no,
                                     id, numbers.size()));
      continue;
    }
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k < numbers.size(); k += 2) pts.emplace_back(numbers[k], numbers[k + 1]);
    RawFeature raw;
    raw.source_id = id;
    if (!name.empty()) raw.name = name;
    coords.push_back(std::move(pts));
    features.push_back(std::move(raw));
  }

  if (features.empty()) {
    throw Error(Errc::empty_network, fmt::format("no segments in edge list ({} rejected)", rejected.size()));
  }
  const bool geographic = options.coordinates == CoordinateMode::geographic;
  auto result = finish_load(std::move(coords), std::move(features), geographic, options);
  result.rejected.insert(result.rejected.begin(), rejected.begin(), rejected.end());
  return result;
}

LoadResult load_network_file(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto ext = path.extension().string();
  if (ext == ".geojson" || ext == ".json") return load_geojson(buf.str(), options);
  return load_edge_list(buf.str(), options);
}

namespace {

int orientation(const Point& a, const Point& b, const Point& c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return orientation(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

struct Box {
  double minx, miny, maxx, maxy;
};

Box box_of(std::span<const Point> pts) {
  Box b{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
  for (const Point& p : pts) {
    b.minx = std::min(b.minx, p.x);
    b.miny = std::min(b.miny, p.y);
    b.maxx = std::max(b.maxx, p.x);
    b.maxy = std::max(b.maxy, p.y);
  }
  return b;
}

/// First point where the two segments meet other than at a junction they
/// share, if any.
std::optional<Point> bad_contact(const RoadNetwork& net, const Segment& s, const Segment& t) {
  auto shared_junction_at = [&](const Point& p) {
    for (End es : {End::from, End::to}) {
      for (End et : {End::from, End::to}) {
        if (s.junction(es) == t.junction(et) && net.junction(s.junction(es)).location == p) return true;
      }
    }
    return false;
  };

  const auto sp = s.geometry.points();
  const auto tp = t.geometry.points();
  for (std::size_t i = 1; i < sp.size(); ++i) {
    const Point& a = sp[i - 1];
    const Point& b = sp[i];
    for (std::size_t k = 1; k < tp.size(); ++k) {
      const Point& c = tp[k - 1];
      const Point& d = tp[k];
      if (std::max(a.x, b.x) < std::min(c.x, d.x) || std::max(c.x, d.x) < std::min(a.x, b.x) ||
          std::max(a.y, b.y) < std::min(c.y, d.y) || std::max(c.y, d.y) < std::min(a.y, b.y)) {
        continue;
      }
      const int o1 = orientation(a, b, c), o2 = orientation(a, b, d);
      const int o3 = orientation(c, d, a), o4 = orientation(c, d, b);
      if (o1 * o2 < 0 && o3 * o4 < 0) {
        const double denom = cross(b - a, d - c);
        const double u = cross(c - a, d - c) / denom;
        return Point{a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
      }
      if (o1 == 0 && o2 == 0 && o3 == 0 && o4 == 0) {
        // Collinear: any overlap of positive length is a defect.
        std::vector<Point> touching;
        for (const Point& p : {a, b}) {
          if (on_segment(c, d, p)) touching.push_back(p);
        }
        for (const Point& p : {c, d}) {
          if (on_segment(a, b, p)) touching.push_back(p);
        }
        for (const Point& p : touching) {
          for (const Point& q : touching) {
            if (!(p == q)) return p;
          }
        }
        for (const Point& p : touching) {
          if (!shared_junction_at(p)) return p;
        }
        continue;
      }
      for (const Point& p : {c, d}) {
        if (on_segment(a, b, p) && !shared_junction_at(p)) return p;
      }
      for (const Point& p : {a, b}) {
        if (on_segment(c, d, p) && !shared_junction_at(p)) return p;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

NodingReport validate_noding(const RoadNetwork& net, double tolerance) {
  NodingReport report;

  const auto segs = net.segments();
  std::vector<Box> boxes;
  boxes.reserve(segs.size());
  for (const auto& s : segs) boxes.push_back(box_of(s.geometry.points()));
  std::vector<std::size_t> order(segs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto l, auto r) { return boxes[l].minx < boxes[r].minx || (boxes[l].minx == boxes[r].minx && l < r); });

  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const auto i = order[oi];
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const auto j = order[oj];
      if (boxes[j].minx > boxes[i].maxx) break;
      if (boxes[j].miny > boxes[i].maxy || boxes[i].miny > boxes[j].maxy) continue;
      const auto lo = std::min(i, j), hi = std::max(i, j);
      if (auto at = bad_contact(net, segs[lo], segs[hi])) report.crossings.push_back({segs[lo].id, segs[hi].id, *at});
    }
  }
  std::sort(report.crossings.begin(), report.crossings.end(),
            [](const Crossing& l, const Crossing& r) { return std::tie(l.a, l.b) < std::tie(r.a, r.b); });

  if (tolerance > 0.0) {
    const auto js = net.junctions();
    std::vector<std::size_t> jorder(js.size());
    std::iota(jorder.begin(), jorder.end(), 0);
    std::sort(jorder.begin(), jorder.end(), [&](auto l, auto r) {
      return js[l].location.x < js[r].location.x || (js[l].location.x == js[r].location.x && l < r);
    });
    for (std::size_t oi = 0; oi < jorder.size(); ++oi) {
      for (std::size_t oj = oi + 1; oj < jorder.size(); ++oj) {
        const auto& a = js[jorder[oi]];
        const auto& b = js[jorder[oj]];
        if (b.location.x - a.location.x >= tolerance) break;
        const double d = distance(a.location, b.location);
        if (d < tolerance) {
          report.close_junctions.push_back({std::min(a.id, b.id), std::max(a.id, b.id), d});
        }
      }
    }
    std::sort(report.close_junctions.begin(), report.close_junctions.end(),
              [](const CloseJunctions& l, const CloseJunctions& r) { return std::tie(l.a, l.b) < std::tie(r.a, r.b); });
  }
  return report;
}

}  // namespace fewturn
