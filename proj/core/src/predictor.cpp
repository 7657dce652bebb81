#include "drivesim/predictor.hpp"

#include <algorithm>
#include <cmath>

namespace drivesim {

std::optional<int> anchor_to_lane(const Track& track, const LaneMap& map, const PredictorConfig& cfg) {
  const Pose2D pose = track.pose();
  std::optional<int> best;
  double best_offset = 0.0;
  for (const auto& [id, lane] : map.lanes()) {
    if (lane.centerline.size() < 2) {
      continue;
    }
    const PathProjection pr = lane.centerline.project(pose.position());
    if (std::abs(pr.lateral) > cfg.lane_capture_width_fraction * lane.width) {
      continue;
    }
    const double tangent = lane.centerline.yaw_at(pr.s);
    if (std::abs(wrap_angle(tangent - pose.yaw)) >= cfg.lane_capture_angle) {
      continue;
    }
    if (!best || std::abs(pr.lateral) < std::abs(best_offset) - 1e-12) {
      best = id;
      best_offset = pr.lateral;
    }
    // Equal offsets resolve to the lower lane id: map iteration is ordered.
  }
  return best;
}

Polyline lane_geometry(const LaneMap& map, int lane_id, double start_s, double needed) {
  Polyline out;
  double skip = start_s;
  std::optional<int> cursor = lane_id;
  int guard = 0;
  while (cursor && out.length() < needed && guard++ < 32) {
    const Lane& l = map.at(*cursor);
    const auto& pts = l.centerline.points();
    const auto& arc = l.centerline.arc();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (arc[i] < skip - 1e-9) {
        continue;
      }
      if (out.empty() && arc[i] > skip + 1e-9) {
        out.append(l.centerline.pose_at(skip));
      }
      out.append(pts[i]);
    }
    if (out.empty()) {
      out.append(l.centerline.pose_at(std::min(skip, l.centerline.length())));
    }
    skip = 0.0;
    cursor = l.successors.empty() ? std::nullopt : std::optional<int>(l.successors.front());
  }
  // Straight continuation from the final pose when the map runs out.
  if (out.length() < needed && !out.empty()) {
    const Pose2D end = out.points().back();
    const double extra = needed - out.length() + 1.0;
    out.append({end.x + extra * std::cos(end.yaw), end.y + extra * std::sin(end.yaw), end.yaw});
  }
  return out;
}

namespace {

Polyline straight_geometry(const Pose2D& pose, double needed) {
  Polyline out;
  out.append(pose);
  const double len = std::max(needed, 1.0) + 1.0;
  out.append({pose.x + len * std::cos(pose.yaw), pose.y + len * std::sin(pose.yaw), pose.yaw});
  return out;
}

Prediction sample_along(Prediction pred, double accel, const PredictorConfig& cfg) {
  pred.samples.clear();
  const int n = static_cast<int>(std::lround(cfg.horizon / cfg.dt));
  const double v0 = pred.base_speed;
  for (int k = 0; k <= n; ++k) {
    const double t = k * cfg.dt;
    double s;
    double v = v0 + accel * t;
    if (accel < 0.0 && v < 0.0) {
      const double t_stop = v0 / -accel;
      s = v0 * t_stop + 0.5 * accel * t_stop * t_stop;
      v = 0.0;
    } else {
      s = v0 * t + 0.5 * accel * t * t;
    }
    PredictionSample sample;
    sample.t = t;
    sample.pose = pred.geometry.pose_at(std::max(0.0, s));
    sample.box = {sample.pose, pred.length, pred.width};
    pred.samples.push_back(sample);
  }
  return pred;
}

}  // namespace

Prediction predict(const Track& track, std::optional<int> anchored_lane, const LaneMap& map,
                   const PredictorConfig& cfg) {
  Prediction pred;
  pred.track_id = track.id;
  pred.category = track.category;
  pred.anchored_lane = anchored_lane;
  pred.length = track.length;
  pred.width = track.width;
  pred.base_speed = std::max(0.0, track.speed());

  const double needed = pred.base_speed * cfg.horizon + 0.5 * 3.0 * cfg.horizon * cfg.horizon + 5.0;
  if (anchored_lane) {
    const Lane& lane = map.at(*anchored_lane);
    const PathProjection pr = lane.centerline.project(track.pose().position());
    // Follow the lane shape but hold the object's current lateral offset, so
    // an edge-hugging rider is not snapped onto the centerline.
    const double keep_offset = std::clamp(pr.lateral, -0.5 * lane.width, 0.5 * lane.width);
    pred.geometry = lane_geometry(map, *anchored_lane, pr.s, needed).offset_by(keep_offset);
  } else {
    pred.geometry = straight_geometry(track.pose(), needed);
  }
  return sample_along(std::move(pred), 0.0, cfg);
}

Prediction integrate_with_accel(const Prediction& base, double accel, const PredictorConfig& cfg) {
  return sample_along(base, accel, cfg);
}

}  // namespace drivesim
