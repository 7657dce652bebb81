#pragma once

#include <map>
#include <vector>

#include "drivesim/assignment.hpp"
#include "drivesim/types.hpp"
#include "drivesim/ukf.hpp"

namespace drivesim {

enum class TrackStatus { Tentative, Active, Dropped };

struct Track {
  int id{0};
  ObjectCategory category{ObjectCategory::Car};
  FilterState filter;
  double length{4.5};
  double width{1.9};
  TrackStatus status{TrackStatus::Tentative};
  int hits{0};    // consecutive assigned ticks
  int misses{0};  // consecutive unassigned ticks

  Pose2D pose() const { return {filter.mean(0), filter.mean(1), filter.mean(2)}; }
  double speed() const { return filter.mean(3); }
  double yaw_rate() const { return filter.mean(4); }
  OrientedBox box() const { return {pose(), length, width}; }
};

struct LifecycleConfig {
  int time_to_init{4};     // consecutive hits before a track turns Active
  int max_active_time{10};  // consecutive misses before a track is dropped
};

struct TrackerConfig {
  std::map<ObjectCategory, LifecycleConfig> lifecycle = {
      {ObjectCategory::Car, {4, 10}},
      {ObjectCategory::Truck, {4, 10}},
      {ObjectCategory::Emergency, {4, 10}},
      {ObjectCategory::OpenDoorCar, {4, 10}},
      {ObjectCategory::Construction, {4, 10}},
      {ObjectCategory::Pedestrian, {2, 20}},
      {ObjectCategory::Bike, {2, 20}},
  };
  double gate{4.0};            // max assignment cost, meters-equivalent
  double yaw_cost_weight{2.0}; // m per rad of wrapped yaw error
  UkfParams ukf;
  double init_speed_var{25.0};  // zero-shot detections carry no speed
  double init_pos_var{0.25};
  double init_yaw_var{0.1};
  double init_yaw_rate_var{0.25};

  const LifecycleConfig& lifecycle_for(ObjectCategory c) const;
};

// Maintains persistent filtered tracks over anonymous detections. Single
// threaded; distinct instances are independent.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg = {}) : cfg_(std::move(cfg)) {}

  // One tick: predict, associate, update, and run lifecycle rules.
  // Returns the Active tracks only.
  std::vector<Track> step(const std::vector<DetectedObject>& detections, double dt);

  const std::vector<Track>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return cfg_; }
  TrackerConfig& config() { return cfg_; }

 private:
  TrackerConfig cfg_;
  std::vector<Track> tracks_;
  int next_id_{1};
};

// Association cost between a predicted track pose and a detection: Euclidean
// position error plus weighted wrapped yaw error. Category mismatches are
// pushed above any finite gate.
double association_cost(const Track& predicted, const DetectedObject& det, const TrackerConfig& cfg);

}  // namespace drivesim
