#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace drivesim {

inline constexpr double kPi = 3.14159265358979323846;

// Normalizes an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) {
    a += 2.0 * kPi;
  }
  return a - kPi;
}

struct Vec2 {
  double x{0.0};
  double y{0.0};

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double k) const { return {x * k, y * k}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

// Pose in the global frame: x east, y north, yaw counterclockwise from +x,
// yaw kept in (-pi, pi].
struct Pose2D {
  double x{0.0};
  double y{0.0};
  double yaw{0.0};

  Vec2 position() const { return {x, y}; }
  Vec2 heading() const { return {std::cos(yaw), std::sin(yaw)}; }
};

// local pose expressed in the ego frame -> global frame
Pose2D to_global(const Pose2D& ego, const Pose2D& local);
// global pose -> ego frame
Pose2D to_ego(const Pose2D& ego, const Pose2D& global);

// Axis-aligned-in-body rectangle footprint.
struct OrientedBox {
  Pose2D center;
  double length{1.0};  // extent along heading, m
  double width{1.0};   // extent across heading, m

  // Counterclockwise corners: front-left, rear-left, rear-right, front-right.
  std::array<Vec2, 4> corners() const;
};

// Minimum distance between two convex quadrilateral footprints.
// Returns 0 when they touch or overlap. Symmetric.
double min_polygon_distance(const OrientedBox& a, const OrientedBox& b);

// True when the interiors intersect (touching edges do not count).
bool boxes_overlap(const OrientedBox& a, const OrientedBox& b);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);
double segment_segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

struct PathProjection {
  double s{0.0};        // arc length of the foot point, clamped to [0, length]
  double lateral{0.0};  // signed offset, left of travel positive
};

// Polyline with cached arc length. Yaw at a point is the chord heading of the
// segment it lies on (interpolated at vertices).
class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Pose2D> points);

  static Polyline from_positions(const std::vector<Vec2>& pts);

  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }
  double length() const { return s_.empty() ? 0.0 : s_.back(); }
  const std::vector<Pose2D>& points() const { return points_; }
  const std::vector<double>& arc() const { return s_; }

  Pose2D pose_at(double s) const;
  double yaw_at(double s) const { return pose_at(s).yaw; }

  // Nearest point on the polyline; ties between equidistant segments resolve
  // to the smaller s.
  PathProjection project(const Vec2& p) const;

  // Parallel offset curve: each vertex moved `offset` along its left normal.
  Polyline offset_by(double offset) const;

  // Sub-polyline covering [s_begin, s_end], endpoints interpolated. The arc
  // of the slice restarts at zero.
  Polyline slice(double s_begin, double s_end) const;

  void append(const Pose2D& p);

 private:
  std::vector<Pose2D> points_;
  std::vector<double> s_;
};

}  // namespace drivesim
