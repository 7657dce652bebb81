#pragma once

#include <optional>
#include <vector>

#include "drivesim/lane_map.hpp"
#include "drivesim/tracker.hpp"
#include "drivesim/types.hpp"

namespace drivesim {

struct PredictionSample {
  double t{0.0};
  Pose2D pose;
  OrientedBox box;
};

// Fixed-horizon trajectory for one tracked object. The geometry polyline and
// base speed are retained so negotiation can re-integrate the motion under an
// assumed acceleration without changing the path.
struct Prediction {
  int track_id{0};
  ObjectCategory category{ObjectCategory::Car};
  std::vector<PredictionSample> samples;  // uniform dt covering [0, horizon]
  std::optional<int> anchored_lane;
  Polyline geometry;   // path the object is assumed to follow
  double base_speed{0.0};
  double length{4.5};
  double width{1.9};
};

struct PredictorConfig {
  double horizon{6.0};
  double dt{0.2};
  double lane_capture_width_fraction{0.75};  // of lane width, lateral capture
  double lane_capture_angle{30.0 * kPi / 180.0};
};

// Lane whose centerline is laterally within the capture fraction of its width
// and whose tangent is within the capture angle of the track heading. Ties go
// to the smaller lateral offset, then the lower lane id.
std::optional<int> anchor_to_lane(const Track& track, const LaneMap& map,
                                  const PredictorConfig& cfg = {});

// Constant speed along the anchored lane (successors concatenated; straight
// continuation past the last mapped point) or constant speed and heading when
// unanchored. Speed is floored at zero.
Prediction predict(const Track& track, std::optional<int> anchored_lane, const LaneMap& map,
                   const PredictorConfig& cfg = {});

// Re-samples a prediction along its own geometry under a constant assumed
// acceleration; speed clamps at standstill.
Prediction integrate_with_accel(const Prediction& base, double accel, const PredictorConfig& cfg = {});

// Lane centerline from start_s onward, concatenated through successors until
// `needed` meters are available, then extended straight.
Polyline lane_geometry(const LaneMap& map, int lane_id, double start_s, double needed);

}  // namespace drivesim
