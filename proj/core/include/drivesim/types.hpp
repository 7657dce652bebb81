#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drivesim/geometry.hpp"

namespace drivesim {

enum class ObjectCategory {
  Car,
  Truck,
  Bike,
  Pedestrian,
  Construction,
  OpenDoorCar,
  Emergency,
};

const char* to_string(ObjectCategory c);
std::optional<ObjectCategory> category_from_string(const std::string& s);

struct DetectedObject {
  ObjectCategory category{ObjectCategory::Car};
  OrientedBox box;           // global frame
  double timestamp{0.0};     // s, the sensing tick it was emitted on
  std::optional<int> id;     // persistent id, present only in privileged mode
};

struct EgoState {
  Pose2D pose;
  double speed{0.0};     // m/s, >= 0
  double accel{0.0};     // m/s^2
  double yaw_rate{0.0};  // rad/s
  OrientedBox box;       // box.center == pose

  void sync_box() { box.center = pose; }
};

enum class SignalKind { TrafficLight, StopSign, SpeedLimit };
enum class LightState { Red, Yellow, Green };

const char* to_string(SignalKind k);
const char* to_string(LightState s);

struct LightPhase {
  double begin{0.0};  // s
  double end{0.0};    // s
  LightState state{LightState::Green};
};

struct TrafficSignal {
  SignalKind kind{SignalKind::TrafficLight};
  Pose2D pose;     // stop line for lights/stop signs, sign post for limits
  int lane_id{0};  // governed lane
  std::vector<LightPhase> schedule;  // disjoint, covers scenario duration
  double speed_value{0.0};           // m/s, SpeedLimit only

  LightState state_at(double t) const;
};

// Observation of one signal after sensing degradation.
struct SignalObservation {
  int index{0};  // index into the scenario signal list
  SignalKind kind{SignalKind::TrafficLight};
  Pose2D pose;
  int lane_id{0};
  LightState light{LightState::Green};
  double speed_value{0.0};
};

enum class InfractionKind {
  CollisionPedestrian,
  CollisionVehicle,
  CollisionStatic,
  RedLight,
  StopSign,
  MinSpeed,
  EmergencyYield,
  RouteDeviation,
  AgentBlocked,
  Timeout,
};

const char* to_string(InfractionKind k);
std::optional<InfractionKind> infraction_from_string(const std::string& s);

struct RawInfractionEvent {
  InfractionKind kind{InfractionKind::CollisionVehicle};
  double time{0.0};  // s
  Pose2D location;
};

struct ControlCommand {
  double throttle{0.0};  // [0, 1]
  double brake{0.0};     // [0, 1], throttle * brake == 0
  double steering{0.0};  // rad, clamped to +-max_steer by the plant
};

}  // namespace drivesim
