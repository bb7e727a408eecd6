#include "fewturn/geometry.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "fewturn/error.hpp"

namespace fewturn {

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 v) { return std::hypot(v.x, v.y); }
double distance(const Point& a, const Point& b) { return norm(b - a); }

Polyline::Polyline(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw Error(Errc::degenerate_geometry, fmt::format("polyline needs at least 2 points, got {}", points_.size()));
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
      throw Error(Errc::degenerate_geometry, fmt::format("non-finite coordinate at point {}", i));
    }
    if (i > 0 && points_[i] == points_[i - 1]) {
      throw Error(Errc::degenerate_geometry, fmt::format("repeated consecutive point at index {}", i));
    }
  }
}

void SplitParams::validate() const {
  if (!(distance > 0.0) || !(ratio > 0.0)) {
    throw Error(Errc::invalid_input,
                fmt::format("split thresholds must be positive (distance={}, ratio={})", distance, ratio));
  }
}

double polyline_length(std::span<const Point> points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) total += distance(points[i - 1], points[i]);
  return total;
}

double signed_deflection_angle(Vec2 dir_in, Vec2 dir_out) {
  if (norm(dir_in) == 0.0 || norm(dir_out) == 0.0) {
    throw Error(Errc::degenerate_geometry, "deflection angle of a zero-length direction");
  }
  return std::atan2(cross(dir_in, dir_out), dot(dir_in, dir_out)) * 180.0 / std::numbers::pi;
}

double deflection_angle(Vec2 dir_in, Vec2 dir_out) { return std::abs(signed_deflection_angle(dir_in, dir_out)); }

double orthogonal_distance(const Point& pt, const Point& chord_a, const Point& chord_b) {
  const Vec2 chord = chord_b - chord_a;
  const double len = norm(chord);
  if (len == 0.0) return distance(pt, chord_a);
  return std::abs(cross(chord, pt - chord_a)) / len;
}

MaxOffset max_chord_offset(std::span<const Point> points) {
  MaxOffset best;
  if (points.size() < 3) return best;
  const Point& a = points.front();
  const Point& b = points.back();
  best.offset = -1.0;
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    const double d = orthogonal_distance(points[i], a, b);
    if (d > best.offset) {
      best.offset = d;
      best.index = i;
    }
  }
  return best;
}

bool split_condition(double max_offset, double chord_length, const SplitParams& params) {
  if (!(max_offset > 0.0)) return false;
  if (max_offset >= params.distance) return true;
  // A closed chain has no chord; any offset counts as an infinitely sharp bend.
  if (chord_length == 0.0) return true;
  return max_offset / chord_length >= params.ratio;
}

namespace {

void split_recursive(std::span<const Point> points, std::size_t first, std::size_t last,
                     const SplitParams& params, std::vector<std::size_t>& out) {
  const auto range = points.subspan(first, last - first + 1);
  const MaxOffset m = max_chord_offset(range);
  if (m.index == 0 || !split_condition(m.offset, distance(range.front(), range.back()), params)) {
    out.push_back(last);
    return;
  }
  const std::size_t mid = first + m.index;
  split_recursive(points, first, mid, params, out);
  split_recursive(points, mid, last, params, out);
}

}  // namespace

std::vector<std::size_t> split_indices(std::span<const Point> points, const SplitParams& params) {
  params.validate();
  std::vector<std::size_t> cuts{0};
  if (points.size() >= 2) split_recursive(points, 0, points.size() - 1, params, cuts);
  return cuts;
}

std::vector<Polyline> split_polyline(const Polyline& p, const SplitParams& params) {
  const auto cuts = split_indices(p.points(), params);
  std::vector<Polyline> pieces;
  pieces.reserve(cuts.size() - 1);
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    pieces.emplace_back(std::vector<Point>(p.points().begin() + static_cast<std::ptrdiff_t>(cuts[k - 1]),
                                           p.points().begin() + static_cast<std::ptrdiff_t>(cuts[k]) + 1));
  }
  return pieces;
}

double project_onto_segment(const Point& pt, const Point& a, const Point& b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return 0.0;
  return std::clamp(dot(pt - a, ab) / len2, 0.0, 1.0);
}

PolylineProjection project_onto_polyline(std::span<const Point> points, const Point& pt) {
  PolylineProjection best;
  best.distance = std::numeric_limits<double>::infinity();
  const double total = polyline_length(points);
  double walked = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const Point& a = points[i - 1];
    const Point& b = points[i];
    const double t = project_onto_segment(pt, a, b);
    const Point foot{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    const double d = distance(pt, foot);
    const double piece = distance(a, b);
    if (d < best.distance) {
      best.distance = d;
      best.foot = foot;
      best.offset = total > 0.0 ? (walked + t * piece) / total : 0.0;
    }
    walked += piece;
  }
  best.offset = std::clamp(best.offset, 0.0, 1.0);
  return best;
}

Point point_at(std::span<const Point> points, double offset) {
  const double total = polyline_length(points);
  double target = std::clamp(offset, 0.0, 1.0) * total;
  if (offset <= 0.0) return points.front();
  if (offset >= 1.0) return points.back();
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double piece = distance(points[i - 1], points[i]);
    if (target <= piece) {
      const double t = piece > 0.0 ? target / piece : 0.0;
      return {points[i - 1].x + t * (points[i].x - points[i - 1].x),
              points[i - 1].y + t * (points[i].y - points[i - 1].y)};
    }
    target -= piece;
  }
  return points.back();
}

std::vector<Point> extract(std::span<const Point> points, double from, double to) {
  const bool reverse = from > to;
  const double lo = std::clamp(std::min(from, to), 0.0, 1.0);
  const double hi = std::clamp(std::max(from, to), 0.0, 1.0);
  const double total = polyline_length(points);

  std::vector<Point> out;
  out.push_back(point_at(points, lo));
  double walked = 0.0;
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    walked += distance(points[i - 1], points[i]);
    const double f = total > 0.0 ? walked / total : 0.0;
    if (f > lo && f < hi) out.push_back(points[i]);
  }
  const Point end = point_at(points, hi);
  if (out.size() == 1 || !(out.back() == end)) out.push_back(end);
  if (out.size() == 1) out.push_back(end);
  if (reverse) std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace fewturn
