#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "drivesim/lane_map.hpp"
#include "drivesim/types.hpp"

namespace drivesim {

struct ActorWaypoint {
  double t{0.0};  // s, relative to script start
  Pose2D pose;
  double speed{0.0};
};

struct ActorScript {
  ObjectCategory category{ObjectCategory::Car};
  double length{4.5};
  double width{1.9};
  std::vector<ActorWaypoint> waypoints;  // times strictly increasing
  std::optional<double> trigger_route_s;  // script starts when ego passes this arc
};

struct DegradationConfig {
  double detection_range{0.0};  // m; <= 0 means unlimited
  double position_noise_sigma{0.0};
  double yaw_noise_sigma{0.0};
  double dropout_prob{0.0};
  bool provide_ids{true};
  double signal_misread_prob{0.0};  // Green reported as Red only
  double ego_pos_noise_sigma{0.0};
  std::uint64_t seed{0};
};

// Thresholds for rule monitoring. The infraction kinds come from the score
// table; the magnitudes are project constants.
struct SimParams {
  double tick{0.05};
  double wheelbase{2.9};
  double throttle_lag_tau{0.3};
  double max_steer{0.6};
  double max_brake{7.0};
  double ego_length{4.9};
  double ego_width{1.85};
  double deviation_limit{30.0};
  double blocked_timeout{180.0};
  double blocked_distance{1.0};
  double min_speed_window{30.0};
  double min_speed_fraction{0.5};
  double stop_sign_zone{5.0};
  double stop_sign_speed{0.1};
  double emergency_distance{50.0};
  double emergency_timeout{15.0};
  double emergency_yield_offset{1.0};
  double route_end_radius{5.0};
};

struct Scenario {
  std::string name;
  LaneMap map;
  RoutePlan route;
  EgoState ego_spawn;
  std::vector<ActorScript> actors;
  std::vector<TrafficSignal> signals;
  double duration{60.0};
  std::uint64_t seed{0};
  SimParams params;

  // Parses a "scenario-v1" JSON file; the lane map path resolves relative to
  // the scenario file. Throws std::runtime_error naming path and field.
  static Scenario load(const std::string& path);
};

struct Observation {
  int tick{0};
  double time{0.0};
  EgoState ego;
  std::vector<DetectedObject> detections;
  std::vector<SignalObservation> signals;
};

struct ActorState {
  Pose2D pose;
  double speed{0.0};
  ObjectCategory category{ObjectCategory::Car};
  OrientedBox box;
};

// Deterministic fixed-step 2D world. Owns ego plant, scripted actors, signal
// schedules, and raw infraction monitoring. Single-threaded; independent
// instances may run concurrently.
class SimWorld {
 public:
  explicit SimWorld(Scenario scenario);

  // Advances one tick. dt must equal the configured tick.
  void step(const ControlCommand& cmd, double dt);

  // Emits degraded observations for the current tick. Noise comes from a
  // counter-based stream keyed on (seed, tick, object index), so dropping one
  // object never shifts another object's noise.
  Observation sense(const DegradationConfig& cfg) const;

  // Rule monitor; call once per tick after step. Events debounce per episode.
  std::vector<RawInfractionEvent> detect_infractions();

  const Scenario& scenario() const { return scenario_; }
  const EgoState& ego() const { return ego_; }
  double time() const { return tick_ * scenario_.params.tick; }
  int tick_index() const { return tick_; }
  std::vector<ActorState> actor_states() const;
  double route_progress() const;  // projected arc length of ego on the route
  bool route_complete() const { return route_complete_; }
  bool terminally_blocked() const { return blocked_emitted_ || deviation_emitted_; }

  // Steady-state longitudinal acceleration for a constant signed command
  // u in [-1, 1] at a given speed, once actuation lag has settled. This is
  // the plant model the feed-forward calibration inverts.
  double steady_accel(double command, double speed) const;
  double max_engine_accel(double speed) const;
  double drag(double speed) const;

 private:
  struct ActorRuntime {
    ActorScript script;
    bool triggered{false};
    double trigger_time{0.0};
    bool in_contact{false};
  };

  ActorState actor_state_at(const ActorRuntime& a, double t) const;
  void check_collisions(double t, std::vector<RawInfractionEvent>& out);
  void check_signals(double t, std::vector<RawInfractionEvent>& out);
  void check_min_speed(double t, std::vector<RawInfractionEvent>& out);
  void check_route_rules(double t, std::vector<RawInfractionEvent>& out);
  void check_emergency(double t, std::vector<RawInfractionEvent>& out);

  Scenario scenario_;
  EgoState ego_;
  double actuation_accel_{0.0};
  int tick_{0};
  std::vector<ActorRuntime> actors_;
  bool route_complete_{false};

  // rule monitor state
  struct SignalMonitor {
    double stop_line_s{0.0};
    double prev_front_s{-1e9};
    bool stopped_in_zone{false};
    bool crossed{false};
  };
  std::vector<SignalMonitor> signal_mon_;
  std::deque<std::pair<double, double>> speed_window_;  // (t, speed)
  bool min_speed_active_{false};
  std::deque<std::pair<double, Vec2>> position_window_;  // (t, position)
  bool blocked_emitted_{false};
  bool deviation_emitted_{false};
  bool timeout_emitted_{false};
  std::vector<double> emergency_since_;  // per actor, -1 when not tailing
};

// Counter-based noise primitives (splitmix64 mixing). Deterministic across
// platforms for identical inputs.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);
double counter_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);
double counter_gaussian(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);

}  // namespace drivesim
