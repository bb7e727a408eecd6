#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fewturn {

/// Planar point in map units.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(const Vec2& v) { return {-v.x, -v.y}; }

double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);
double norm(Vec2 v);
double distance(const Point& a, const Point& b);

/// Ordered point list with at least two points and no repeated consecutive
/// points. Construction validates; a Polyline is always well-formed.
class Polyline {
 public:
  explicit Polyline(std::vector<Point> points);

  std::span<const Point> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Point& front() const { return points_.front(); }
  const Point& back() const { return points_.back(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  friend bool operator==(const Polyline&, const Polyline&) = default;

 private:
  std::vector<Point> points_;
};

/// Thresholds for critical-point splitting. A chain is split at its point of
/// maximum chord offset when that offset reaches `distance`, or when the
/// offset divided by the chord length reaches `ratio`.
struct SplitParams {
  double distance = 1.0;
  double ratio = 0.2;

  void validate() const;
};

double polyline_length(std::span<const Point> points);
inline double polyline_length(const Polyline& p) { return polyline_length(p.points()); }

/// Angle in degrees between the straight continuation of `dir_in` and
/// `dir_out`: 0 is straight on, 180 a full reversal. Throws on zero vectors.
double deflection_angle(Vec2 dir_in, Vec2 dir_out);

/// Signed variant: positive when `dir_out` bends counter-clockwise (left).
double signed_deflection_angle(Vec2 dir_in, Vec2 dir_out);

/// Perpendicular distance from `pt` to the infinite line through the chord.
/// A degenerate chord falls back to the Euclidean distance to its point.
double orthogonal_distance(const Point& pt, const Point& chord_a, const Point& chord_b);

/// Interior point of `points` farthest from the first-last chord; lowest index
/// wins ties. Returns 0 when there are no interior points.
struct MaxOffset {
  std::size_t index = 0;
  double offset = 0.0;
};
MaxOffset max_chord_offset(std::span<const Point> points);

/// True when the split test fires for the given offset and chord length.
bool split_condition(double max_offset, double chord_length, const SplitParams& params);

/// Indices of the piece boundaries produced by recursive critical-point
/// splitting, always starting with 0 and ending with points.size() - 1.
std::vector<std::size_t> split_indices(std::span<const Point> points, const SplitParams& params);

/// Pieces of `p` after recursive splitting. Consecutive pieces share their
/// boundary point, so concatenating them reproduces `p`.
std::vector<Polyline> split_polyline(const Polyline& p, const SplitParams& params);

/// Closest point on segment [a, b] to `pt`, as a parameter in [0, 1].
double project_onto_segment(const Point& pt, const Point& a, const Point& b);

struct PolylineProjection {
  double distance = 0.0;  // from the query point to the polyline
  double offset = 0.0;    // arc-length fraction in [0, 1]
  Point foot;
};
PolylineProjection project_onto_polyline(std::span<const Point> points, const Point& pt);

/// Point at arc-length fraction `offset` along the polyline.
Point point_at(std::span<const Point> points, double offset);

/// Sub-polyline between two arc-length fractions, in traversal order (so
/// `from > to` walks the polyline backwards). Always returns >= 2 points,
/// duplicating the point for a zero-length extract.
std::vector<Point> extract(std::span<const Point> points, double from, double to);

}  // namespace fewturn
