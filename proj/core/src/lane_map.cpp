#include "drivesim/lane_map.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "drivesim/types.hpp"
#include "json.hpp"

namespace drivesim {

namespace {

[[noreturn]] void schema_error(const std::string& origin, const std::string& what) {
  throw std::runtime_error(origin + ": " + what);
}

}  // namespace

const char* to_string(ObjectCategory c) {
  switch (c) {
    case ObjectCategory::Car: return "Car";
    case ObjectCategory::Truck: return "Truck";
    case ObjectCategory::Bike: return "Bike";
    case ObjectCategory::Pedestrian: return "Pedestrian";
    case ObjectCategory::Construction: return "Construction";
    case ObjectCategory::OpenDoorCar: return "OpenDoorCar";
    case ObjectCategory::Emergency: return "Emergency";
  }
  return "Car";
}

std::optional<ObjectCategory> category_from_string(const std::string& s) {
  static const std::map<std::string, ObjectCategory> table = {
      {"Car", ObjectCategory::Car},
      {"Truck", ObjectCategory::Truck},
      {"Bike", ObjectCategory::Bike},
      {"Pedestrian", ObjectCategory::Pedestrian},
      {"Construction", ObjectCategory::Construction},
      {"OpenDoorCar", ObjectCategory::OpenDoorCar},
      {"Emergency", ObjectCategory::Emergency},
  };
  const auto it = table.find(s);
  if (it == table.end()) {
    return std::nullopt;
  }
  return it->second;
}

const char* to_string(SignalKind k) {
  switch (k) {
    case SignalKind::TrafficLight: return "TrafficLight";
    case SignalKind::StopSign: return "StopSign";
    case SignalKind::SpeedLimit: return "SpeedLimit";
  }
  return "TrafficLight";
}

const char* to_string(LightState s) {
  switch (s) {
    case LightState::Red: return "Red";
    case LightState::Yellow: return "Yellow";
    case LightState::Green: return "Green";
  }
  return "Green";
}

const char* to_string(InfractionKind k) {
  switch (k) {
    case InfractionKind::CollisionPedestrian: return "CollisionPedestrian";
    case InfractionKind::CollisionVehicle: return "CollisionVehicle";
    case InfractionKind::CollisionStatic: return "CollisionStatic";
    case InfractionKind::RedLight: return "RedLight";
    case InfractionKind::StopSign: return "StopSign";
    case InfractionKind::MinSpeed: return "MinSpeed";
    case InfractionKind::EmergencyYield: return "EmergencyYield";
    case InfractionKind::RouteDeviation: return "RouteDeviation";
    case InfractionKind::AgentBlocked: return "AgentBlocked";
    case InfractionKind::Timeout: return "Timeout";
  }
  return "CollisionVehicle";
}

std::optional<InfractionKind> infraction_from_string(const std::string& s) {
  static const std::map<std::string, InfractionKind> table = {
      {"CollisionPedestrian", InfractionKind::CollisionPedestrian},
      {"CollisionVehicle", InfractionKind::CollisionVehicle},
      {"CollisionStatic", InfractionKind::CollisionStatic},
      {"RedLight", InfractionKind::RedLight},
      {"StopSign", InfractionKind::StopSign},
      {"MinSpeed", InfractionKind::MinSpeed},
      {"EmergencyYield", InfractionKind::EmergencyYield},
      {"RouteDeviation", InfractionKind::RouteDeviation},
      {"AgentBlocked", InfractionKind::AgentBlocked},
      {"Timeout", InfractionKind::Timeout},
  };
  const auto it = table.find(s);
  if (it == table.end()) {
    return std::nullopt;
  }
  return it->second;
}

LightState TrafficSignal::state_at(double t) const {
  for (const LightPhase& ph : schedule) {
    if (t >= ph.begin && t < ph.end) {
      return ph.state;
    }
  }
  return schedule.empty() ? LightState::Green : schedule.back().state;
}

LaneMap::LaneMap(std::vector<Lane> lanes) {
  for (Lane& l : lanes) {
    const int id = l.id;
    lanes_.emplace(id, std::move(l));
  }
}

const Lane* LaneMap::find(int id) const {
  const auto it = lanes_.find(id);
  return it == lanes_.end() ? nullptr : &it->second;
}

const Lane& LaneMap::at(int id) const {
  const Lane* l = find(id);
  if (l == nullptr) {
    throw std::runtime_error("unknown lane id " + std::to_string(id));
  }
  return *l;
}

LaneMap LaneMap::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open lane map file: " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str(), path);
}

LaneMap LaneMap::from_json_text(const std::string& text, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    schema_error(origin, std::string("invalid JSON: ") + e.what());
  }
  if (doc.value("version", "") != "lanemap-v1") {
    schema_error(origin, "version: expected \"lanemap-v1\"");
  }
  if (!doc.contains("lanes") || !doc["lanes"].is_array()) {
    schema_error(origin, "lanes: expected an array");
  }
  std::vector<Lane> lanes;
  for (const auto& jl : doc["lanes"]) {
    Lane lane;
    if (!jl.contains("id")) {
      schema_error(origin, "lane missing id");
    }
    lane.id = jl["id"].get<int>();
    const std::string where = "lane " + std::to_string(lane.id);
    if (!jl.contains("centerline") || !jl["centerline"].is_array() || jl["centerline"].size() < 2) {
      schema_error(origin, where + ": centerline needs >= 2 points");
    }
    std::vector<Pose2D> pts;
    for (const auto& jp : jl["centerline"]) {
      if (!jp.is_array() || jp.size() != 3) {
        schema_error(origin, where + ": centerline points must be [x, y, yaw]");
      }
      pts.push_back({jp[0].get<double>(), jp[1].get<double>(), wrap_angle(jp[2].get<double>())});
    }
    lane.centerline = Polyline(std::move(pts));
    const auto& arc = lane.centerline.arc();
    for (std::size_t i = 1; i < arc.size(); ++i) {
      const double ds = arc[i] - arc[i - 1];
      if (ds <= 0.0) {
        schema_error(origin, where + ": centerline arc length must be strictly increasing");
      }
      if (ds > 5.0 + 1e-9) {
        schema_error(origin, where + ": consecutive centerline points must be <= 5 m apart");
      }
    }
    lane.width = jl.value("width", 3.5);
    if (lane.width <= 0.0) {
      schema_error(origin, where + ": width must be > 0");
    }
    lane.speed_limit = jl.value("speed_limit", 13.89);
    if (jl.contains("successors")) {
      lane.successors = jl["successors"].get<std::vector<int>>();
    }
    auto parse_neighbor = [&](const char* key) -> std::optional<LaneNeighbor> {
      if (!jl.contains(key) || jl[key].is_null()) {
        return std::nullopt;
      }
      const auto& jn = jl[key];
      if (!jn.contains("id")) {
        schema_error(origin, where + ": neighbor missing id");
      }
      return LaneNeighbor{jn["id"].get<int>(), jn.value("same_direction", true)};
    };
    lane.left = parse_neighbor("left");
    lane.right = parse_neighbor("right");
    lanes.push_back(std::move(lane));
  }
  LaneMap map(std::move(lanes));
  for (const auto& [id, lane] : map.lanes()) {
    for (int succ : lane.successors) {
      if (map.find(succ) == nullptr) {
        schema_error(origin, "lane " + std::to_string(id) + ": unknown successor " + std::to_string(succ));
      }
    }
    for (const auto& nb : {lane.left, lane.right}) {
      if (nb && map.find(nb->lane_id) == nullptr) {
        schema_error(origin, "lane " + std::to_string(id) + ": unknown neighbor " + std::to_string(nb->lane_id));
      }
    }
  }
  return map;
}

RoutePlan build_route(const LaneMap& map, const std::vector<int>& lane_ids) {
  if (lane_ids.empty()) {
    throw std::runtime_error("route needs at least one lane");
  }
  Polyline path;
  for (int id : lane_ids) {
    const Lane& lane = map.at(id);
    bool entering = true;
    for (const Pose2D& p : lane.centerline.points()) {
      if (!path.empty()) {
        const Pose2D& last = path.points().back();
        const double gap = std::hypot(p.x - last.x, p.y - last.y);
        if (gap < 1e-6) {
          entering = false;
          continue;  // coincident junction point
        }
        if (entering && gap >= 0.5) {
          throw std::runtime_error("route gap of " + std::to_string(gap) + " m entering lane " +
                                   std::to_string(id));
        }
      }
      entering = false;
      path.append(p);
    }
  }
  RoutePlan route;
  route.total_length = path.length();
  route.reference_path = std::move(path);
  route.lane_sequence = lane_ids;
  return route;
}

}  // namespace drivesim
