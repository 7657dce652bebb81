#include "drivesim/geometry.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>

namespace drivesim {

Pose2D to_global(const Pose2D& ego, const Pose2D& local) {
  const double c = std::cos(ego.yaw);
  const double s = std::sin(ego.yaw);
  return {ego.x + c * local.x - s * local.y,
          ego.y + s * local.x + c * local.y,
          wrap_angle(ego.yaw + local.yaw)};
}

Pose2D to_ego(const Pose2D& ego, const Pose2D& global) {
  const double c = std::cos(ego.yaw);
  const double s = std::sin(ego.yaw);
  const double dx = global.x - ego.x;
  const double dy = global.y - ego.y;
  return {c * dx + s * dy, -s * dx + c * dy, wrap_angle(global.yaw - ego.yaw)};
}

std::array<Vec2, 4> OrientedBox::corners() const {
  const double c = std::cos(center.yaw);
  const double s = std::sin(center.yaw);
  const double hl = 0.5 * length;
  const double hw = 0.5 * width;
  auto corner = [&](double lx, double ly) -> Vec2 {
    return {center.x + c * lx - s * ly, center.y + s * lx + c * ly};
  };
  return {corner(hl, hw), corner(-hl, hw), corner(-hl, -hw), corner(hl, -hw)};
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  if (len2 <= 0.0) {
    return (p - a).norm();
  }
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

namespace {

bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  const auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return (q - p).cross(r - p);
  };
  const double o1 = orient(a0, a1, b0);
  const double o2 = orient(a0, a1, b1);
  const double o3 = orient(b0, b1, a0);
  const double o4 = orient(b0, b1, a1);
  return ((o1 > 0.0) != (o2 > 0.0)) && ((o3 > 0.0) != (o4 > 0.0)) &&
         o1 != 0.0 && o2 != 0.0 && o3 != 0.0 && o4 != 0.0;
}

// Projects the 4 corners onto an axis and returns the [min, max] interval.
std::pair<double, double> project_onto_axis(const std::array<Vec2, 4>& corners, const Vec2& axis) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Vec2& c : corners) {
    const double v = c.dot(axis);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace

double segment_segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  if (segments_intersect(a0, a1, b0, b1)) {
    return 0.0;
  }
  double d = point_segment_distance(a0, b0, b1);
  d = std::min(d, point_segment_distance(a1, b0, b1));
  d = std::min(d, point_segment_distance(b0, a0, a1));
  d = std::min(d, point_segment_distance(b1, a0, a1));
  return d;
}

bool boxes_overlap(const OrientedBox& a, const OrientedBox& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const std::array<Vec2, 4> axes = {
      Vec2{std::cos(a.center.yaw), std::sin(a.center.yaw)},
      Vec2{-std::sin(a.center.yaw), std::cos(a.center.yaw)},
      Vec2{std::cos(b.center.yaw), std::sin(b.center.yaw)},
      Vec2{-std::sin(b.center.yaw), std::cos(b.center.yaw)},
  };
  for (const Vec2& axis : axes) {
    const auto [alo, ahi] = project_onto_axis(ca, axis);
    const auto [blo, bhi] = project_onto_axis(cb, axis);
    if (ahi <= blo || bhi <= alo) {
      return false;  // separating axis (touching counts as separated)
    }
  }
  return true;
}

double min_polygon_distance(const OrientedBox& a, const OrientedBox& b) {
  if (boxes_overlap(a, b)) {
    return 0.0;
  }
  const auto ca = a.corners();
  const auto cb = b.corners();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    const Vec2& p0 = ca[i];
    const Vec2& p1 = ca[(i + 1) % 4];
    for (int j = 0; j < 4; ++j) {
      best = std::min(best, segment_segment_distance(p0, p1, cb[j], cb[(j + 1) % 4]));
    }
  }
  return best;
}

Polyline::Polyline(std::vector<Pose2D> points) : points_(std::move(points)) {
  s_.resize(points_.size(), 0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double dx = points_[i].x - points_[i - 1].x;
    const double dy = points_[i].y - points_[i - 1].y;
    s_[i] = s_[i - 1] + std::hypot(dx, dy);
  }
}

Polyline Polyline::from_positions(const std::vector<Vec2>& pts) {
  std::vector<Pose2D> poses;
  poses.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double yaw = 0.0;
    if (pts.size() >= 2) {
      const std::size_t j = (i + 1 < pts.size()) ? i : i - 1;
      const std::size_t k = (i + 1 < pts.size()) ? i + 1 : i;
      yaw = std::atan2(pts[k].y - pts[j].y, pts[k].x - pts[j].x);
    }
    poses.push_back({pts[i].x, pts[i].y, yaw});
  }
  return Polyline(std::move(poses));
}

void Polyline::append(const Pose2D& p) {
  if (points_.empty()) {
    points_.push_back(p);
    s_.push_back(0.0);
    return;
  }
  const double ds = std::hypot(p.x - points_.back().x, p.y - points_.back().y);
  points_.push_back(p);
  s_.push_back(s_.back() + ds);
}

Pose2D Polyline::pose_at(double s) const {
  if (points_.empty()) {
    throw std::invalid_argument("pose_at on empty polyline");
  }
  if (points_.size() == 1 || s <= 0.0) {
    Pose2D p = points_.front();
    if (s < 0.0 && points_.size() >= 2) {
      // extrapolate backwards along the first segment heading
      const double yaw = points_.front().yaw;
      p.x += s * std::cos(yaw);
      p.y += s * std::sin(yaw);
    }
    return p;
  }
  if (s >= length()) {
    Pose2D p = points_.back();
    const double extra = s - length();
    if (extra > 0.0) {
      p.x += extra * std::cos(p.yaw);
      p.y += extra * std::sin(p.yaw);
    }
    return p;
  }
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - s_.begin());  // s_[i-1] <= s < s_[i]
  const double seg = s_[i] - s_[i - 1];
  const double t = seg > 0.0 ? (s - s_[i - 1]) / seg : 0.0;
  const Pose2D& p0 = points_[i - 1];
  const Pose2D& p1 = points_[i];
  const double dyaw = wrap_angle(p1.yaw - p0.yaw);
  return {p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y), wrap_angle(p0.yaw + t * dyaw)};
}

PathProjection Polyline::project(const Vec2& p) const {
  if (points_.size() < 2) {
    throw std::invalid_argument("project requires a polyline with >= 2 points");
  }
  double best_d2 = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  double best_side = 0.0;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const Vec2 a = points_[i].position();
    const Vec2 b = points_[i + 1].position();
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    if (len2 <= 0.0) {
      continue;
    }
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    const Vec2 foot = a + ab * t;
    const Vec2 d = p - foot;
    const double d2 = d.dot(d);
    if (d2 < best_d2 - 1e-15) {
      best_d2 = d2;
      best_s = s_[i] + t * std::sqrt(len2);
      best_side = ab.cross(d) >= 0.0 ? 1.0 : -1.0;
    }
  }
  // Points past either end: s stays clamped, but the offset is measured
  // against the terminal segment's line, not the end vertex.
  const auto terminal_lateral = [&](std::size_t i0, std::size_t i1,
                                    const Vec2& anchor) -> std::optional<double> {
    const Vec2 a = points_[i0].position();
    const Vec2 b = points_[i1].position();
    const Vec2 ab = b - a;
    const double len = ab.norm();
    if (len <= 0.0) {
      return std::nullopt;
    }
    const Vec2 dir = ab * (1.0 / len);
    return dir.cross(p - anchor);
  };
  if (best_s >= length() - 1e-12) {
    const Vec2 end = points_.back().position();
    const Vec2 prev = points_[points_.size() - 2].position();
    if ((p - end).dot(end - prev) > 0.0) {
      if (const auto lat = terminal_lateral(points_.size() - 2, points_.size() - 1, end)) {
        return {length(), *lat};
      }
    }
  } else if (best_s <= 1e-12) {
    const Vec2 front = points_.front().position();
    const Vec2 next = points_[1].position();
    if ((p - front).dot(next - front) < 0.0) {
      if (const auto lat = terminal_lateral(0, 1, front)) {
        return {0.0, *lat};
      }
    }
  }
  return {best_s, best_side * std::sqrt(best_d2)};
}

Polyline Polyline::offset_by(double offset) const {
  std::vector<Pose2D> out;
  out.reserve(points_.size());
  for (const Pose2D& p : points_) {
    out.push_back({p.x - offset * std::sin(p.yaw), p.y + offset * std::cos(p.yaw), p.yaw});
  }
  return Polyline(std::move(out));
}

Polyline Polyline::slice(double s_begin, double s_end) const {
  Polyline out;
  if (points_.size() < 2 || s_end <= s_begin) {
    return out;
  }
  const double lo = std::max(0.0, s_begin);
  const double hi = std::min(length(), s_end);
  out.append(pose_at(lo));
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (s_[i] > lo && s_[i] < hi) {
      out.append(points_[i]);
    }
  }
  if (hi > lo) {
    out.append(pose_at(hi));
  }
  return out;
}

}  // namespace drivesim
