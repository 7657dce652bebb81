#pragma once

#include <map>
#include <optional>
#include <vector>

#include "drivesim/lane_map.hpp"
#include "drivesim/predictor.hpp"
#include "drivesim/types.hpp"

namespace drivesim {

enum class LaneDecisionKind { KeepLane, Bypass, ChangeLane, WaitForGap };

const char* to_string(LaneDecisionKind k);

struct LaneDecision {
  LaneDecisionKind kind{LaneDecisionKind::KeepLane};
  int side{0};            // Bypass: +1 left, -1 right
  double offset{0.0};     // Bypass lateral offset, m
  int target_lane{-1};    // ChangeLane / WaitForGap
  double required_gap{0.0};
  double observed_gap{0.0};
  int trigger_track{-1};
  double window_begin_s{0.0};  // route arc the avoidance window spans
  double window_end_s{0.0};
};

struct NegotiationOutcome {
  std::map<int, double> assumed_accel;  // track id -> m/s^2
  std::vector<Prediction> adjusted;
};

struct BehaviorConfig {
  double a_yield{2.0};
  double a_emergency{2.0};
  double corridor_margin{0.4};   // added to ego width for the front corridor
  double front_range{60.0};
  double stopped_speed{0.3};
  double stopped_duration{3.0};
  double comfort_min{-3.0};
  double comfort_max{2.0};
  double clearing_margin{1.5};  // s subtracted from the interception time
  double bypass_margin{0.6};     // residual corridor must exceed ego width by this
  double bypass_clearance{0.3};
  double bypass_shoulder{0.5};   // allowance beyond the lane edge
  double bypass_taper{15.0};
  double change_blend{30.0};
  double stop_standoff{12.0};    // gap-wait hold point ahead of a blocker
  double signal_standoff{1.5};
  double interception_clearance{6.0};
  double ego_length{4.9};
  double ego_width{1.85};
};

struct BehaviorOutput {
  RoutePlan translated;
  LaneDecision decision;
  std::vector<Prediction> adjusted;
  std::optional<double> stop_s;  // route arc where the ego must be stationary
  double speed_limit{13.89};
};

// Gap needed before borrowing an opposite-direction lane.
double required_gap(double oncoming_speed, double blocker_length);

// High-level decisions. Owns small hysteresis memory (per-track stop timers,
// the held avoidance decision, served stop signs); everything else is pure.
class BehaviorPlanner {
 public:
  explicit BehaviorPlanner(BehaviorConfig cfg = {}) : cfg_(std::move(cfg)) {}

  BehaviorOutput decide(const EgoState& ego, const RoutePlan& route,
                        const std::vector<Prediction>& predictions, const LaneMap& map,
                        const std::vector<SignalObservation>& signals, double now);

  NegotiationOutcome negotiate(const EgoState& ego, const std::vector<Prediction>& predictions,
                               const RoutePlan& route) const;

  LaneDecision decide_lane(const EgoState& ego, const RoutePlan& route,
                           const std::vector<Prediction>& predictions, const LaneMap& map,
                           double now);

  RoutePlan translate_reference(const RoutePlan& route, const LaneDecision& decision,
                                const LaneMap& map, double ego_s) const;

  const BehaviorConfig& config() const { return cfg_; }

 private:
  struct FrontObject {
    const Prediction* pred{nullptr};
    double s{0.0};
    double lateral{0.0};
    double lat_lo{0.0};
    double lat_hi{0.0};
  };

  std::optional<FrontObject> find_front_object(const EgoState& ego, const RoutePlan& route,
                                               const std::vector<Prediction>& predictions) const;
  bool is_stopped(int track_id, double speed, double now);
  int route_lane_at(const RoutePlan& route, const LaneMap& map, const Vec2& position) const;

  BehaviorConfig cfg_;
  std::map<int, double> stopped_since_;
  std::optional<LaneDecision> held_;
  std::map<int, bool> served_stop_signs_;
};

}  // namespace drivesim
