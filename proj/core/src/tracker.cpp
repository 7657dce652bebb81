#include "drivesim/tracker.hpp"

#include <algorithm>
#include <cmath>

namespace drivesim {

const LifecycleConfig& TrackerConfig::lifecycle_for(ObjectCategory c) const {
  static const LifecycleConfig fallback{4, 10};
  const auto it = lifecycle.find(c);
  return it == lifecycle.end() ? fallback : it->second;
}

double association_cost(const Track& predicted, const DetectedObject& det, const TrackerConfig& cfg) {
  if (predicted.category != det.category) {
    return cfg.gate + 1.0e6;
  }
  const double dx = predicted.filter.mean(0) - det.box.center.x;
  const double dy = predicted.filter.mean(1) - det.box.center.y;
  const double dyaw = wrap_angle(predicted.filter.mean(2) - det.box.center.yaw);
  return std::hypot(dx, dy) + cfg.yaw_cost_weight * std::abs(dyaw);
}

namespace {

Track spawn_track(const DetectedObject& det, int id, const TrackerConfig& cfg) {
  Track t;
  t.id = id;
  t.category = det.category;
  t.length = det.box.length;
  t.width = det.box.width;
  t.status = TrackStatus::Tentative;
  t.hits = 1;
  t.misses = 0;
  t.filter.mean << det.box.center.x, det.box.center.y, det.box.center.yaw, 0.0, 0.0;
  t.filter.cov = StateMat::Zero();
  t.filter.cov(0, 0) = cfg.init_pos_var;
  t.filter.cov(1, 1) = cfg.init_pos_var;
  t.filter.cov(2, 2) = cfg.init_yaw_var;
  t.filter.cov(3, 3) = cfg.init_speed_var;
  t.filter.cov(4, 4) = cfg.init_yaw_rate_var;
  return t;
}

}  // namespace

std::vector<Track> Tracker::step(const std::vector<DetectedObject>& detections, double dt) {
  // Predict all tracks to the detection time.
  for (Track& t : tracks_) {
    t.filter = ukf_predict(t.filter, dt, cfg_.ukf);
  }

  CostMatrix cost;
  cost.rows = tracks_.size();
  cost.cols = detections.size();
  cost.cost.resize(cost.rows * cost.cols);
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    for (std::size_t j = 0; j < detections.size(); ++j) {
      cost(i, j) = association_cost(tracks_[i], detections[j], cfg_);
    }
  }
  AssignmentResult assoc;
  if (cost.rows > 0 && cost.cols > 0) {
    assoc = solve_assignment(cost, cfg_.gate);
  } else {
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
      assoc.unmatched_rows.push_back(static_cast<int>(i));
    }
    for (std::size_t j = 0; j < detections.size(); ++j) {
      assoc.unmatched_cols.push_back(static_cast<int>(j));
    }
  }

  std::vector<char> track_matched(tracks_.size(), 0);
  for (const auto& [row, col] : assoc.matches) {
    Track& t = tracks_[static_cast<std::size_t>(row)];
    const DetectedObject& det = detections[static_cast<std::size_t>(col)];
    MeasVec z;
    z << det.box.center.x, det.box.center.y, det.box.center.yaw;
    t.filter = ukf_update(t.filter, z, cfg_.ukf);
    t.length = det.box.length;
    t.width = det.box.width;
    t.hits += 1;
    t.misses = 0;
    track_matched[static_cast<std::size_t>(row)] = 1;
  }

  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    Track& t = tracks_[i];
    const LifecycleConfig& life = cfg_.lifecycle_for(t.category);
    if (!track_matched[i]) {
      t.hits = 0;
      t.misses += 1;
      if (t.misses >= life.max_active_time) {
        t.status = TrackStatus::Dropped;
      }
    } else if (t.status == TrackStatus::Tentative && t.hits >= life.time_to_init) {
      t.status = TrackStatus::Active;
    }
  }

  for (int col : assoc.unmatched_cols) {
    const DetectedObject& det = detections[static_cast<std::size_t>(col)];
    Track t = spawn_track(det, next_id_++, cfg_);
    const LifecycleConfig& life = cfg_.lifecycle_for(t.category);
    if (t.hits >= life.time_to_init) {
      t.status = TrackStatus::Active;
    }
    tracks_.push_back(std::move(t));
  }

  tracks_.erase(std::remove_if(tracks_.begin(), tracks_.end(),
                               [](const Track& t) { return t.status == TrackStatus::Dropped; }),
                tracks_.end());

  std::vector<Track> active;
  for (const Track& t : tracks_) {
    if (t.status == TrackStatus::Active) {
      active.push_back(t);
    }
  }
  return active;
}

}  // namespace drivesim
