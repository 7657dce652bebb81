#include "drivesim/sim_world.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace drivesim {

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed ^ 0x2545f4914f6cdd1dull);
  h = mix(h ^ a);
  h = mix(h ^ b);
  h = mix(h ^ c);
  return h;
}

double counter_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return (counter_hash(seed, a, b, c) >> 11) * 0x1.0p-53;
}

double counter_gaussian(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  const double u1 = std::max(counter_uniform(seed, a, b, 2 * c), 1e-12);
  const double u2 = counter_uniform(seed, a, b, 2 * c + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

namespace {

[[noreturn]] void scen_error(const std::string& origin, const std::string& what) {
  throw std::runtime_error(origin + ": " + what);
}

}  // namespace

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open scenario file: " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const std::exception& e) {
    scen_error(path, std::string("invalid JSON: ") + e.what());
  }
  if (doc.value("version", "") != "scenario-v1") {
    scen_error(path, "version: expected \"scenario-v1\"");
  }

  Scenario sc;
  sc.name = doc.value("name", std::filesystem::path(path).stem().string());
  if (!doc.contains("lanemap")) {
    scen_error(path, "missing lanemap");
  }
  const auto map_path = std::filesystem::path(path).parent_path() / doc["lanemap"].get<std::string>();
  sc.map = LaneMap::load(map_path.string());

  if (!doc.contains("route") || !doc["route"].is_array() || doc["route"].empty()) {
    scen_error(path, "route: expected a nonempty lane id array");
  }
  sc.route = build_route(sc.map, doc["route"].get<std::vector<int>>());

  if (!doc.contains("ego")) {
    scen_error(path, "missing ego");
  }
  {
    const auto& je = doc["ego"];
    const int lane_id = je.value("lane", sc.route.lane_sequence.front());
    if (lane_id != sc.route.lane_sequence.front()) {
      scen_error(path, "ego.lane: spawn must lie on the route's first lane");
    }
    const double s = je.value("s", 0.0);
    const Lane& lane = sc.map.at(lane_id);
    sc.ego_spawn.pose = lane.centerline.pose_at(s);
    sc.ego_spawn.speed = je.value("speed", 0.0);
    sc.ego_spawn.box = {sc.ego_spawn.pose, sc.params.ego_length, sc.params.ego_width};
  }

  if (doc.contains("duration")) {
    sc.duration = doc["duration"].get<double>();
  }
  if (sc.duration <= 0.0) {
    scen_error(path, "duration must be > 0");
  }
  sc.seed = doc.value("seed", 0ull);

  if (doc.contains("params")) {
    const auto& jp = doc["params"];
    sc.params.blocked_timeout = jp.value("blocked_timeout", sc.params.blocked_timeout);
    sc.params.deviation_limit = jp.value("deviation_limit", sc.params.deviation_limit);
    sc.params.min_speed_window = jp.value("min_speed_window", sc.params.min_speed_window);
    sc.params.min_speed_fraction = jp.value("min_speed_fraction", sc.params.min_speed_fraction);
    sc.params.emergency_timeout = jp.value("emergency_timeout", sc.params.emergency_timeout);
  }

  int actor_idx = 0;
  for (const auto& ja : doc.value("actors", nlohmann::json::array())) {
    ActorScript a;
    const std::string where = "actor #" + std::to_string(actor_idx);
    const auto cat = category_from_string(ja.value("category", "Car"));
    if (!cat) {
      scen_error(path, where + ": unknown category " + ja.value("category", ""));
    }
    a.category = *cat;
    a.length = ja.value("length", 4.5);
    a.width = ja.value("width", 1.9);
    if (!ja.contains("waypoints") || ja["waypoints"].empty()) {
      scen_error(path, where + ": needs waypoints");
    }
    for (const auto& jw : ja["waypoints"]) {
      if (!jw.is_array() || jw.size() != 5) {
        scen_error(path, where + ": waypoints must be [t, x, y, yaw, speed]");
      }
      a.waypoints.push_back({jw[0].get<double>(),
                             {jw[1].get<double>(), jw[2].get<double>(), wrap_angle(jw[3].get<double>())},
                             jw[4].get<double>()});
    }
    for (std::size_t i = 1; i < a.waypoints.size(); ++i) {
      if (a.waypoints[i].t <= a.waypoints[i - 1].t) {
        scen_error(path, where + ": waypoint times must be strictly increasing");
      }
    }
    if (ja.contains("trigger_route_s")) {
      a.trigger_route_s = ja["trigger_route_s"].get<double>();
    }
    sc.actors.push_back(std::move(a));
    ++actor_idx;
  }

  int sig_idx = 0;
  for (const auto& js : doc.value("signals", nlohmann::json::array())) {
    TrafficSignal s;
    const std::string where = "signal #" + std::to_string(sig_idx);
    const std::string kind = js.value("kind", "TrafficLight");
    if (kind == "TrafficLight") {
      s.kind = SignalKind::TrafficLight;
    } else if (kind == "StopSign") {
      s.kind = SignalKind::StopSign;
    } else if (kind == "SpeedLimit") {
      s.kind = SignalKind::SpeedLimit;
    } else {
      scen_error(path, where + ": unknown kind " + kind);
    }
    if (!js.contains("lane")) {
      scen_error(path, where + ": missing lane");
    }
    s.lane_id = js["lane"].get<int>();
    const Lane* lane = sc.map.find(s.lane_id);
    if (lane == nullptr) {
      scen_error(path, where + ": unknown lane " + std::to_string(s.lane_id));
    }
    s.pose = lane->centerline.pose_at(js.value("s", 0.0));
    s.speed_value = js.value("value", 0.0);
    if (s.kind == SignalKind::TrafficLight) {
      if (!js.contains("schedule") || js["schedule"].empty()) {
        scen_error(path, where + ": traffic light needs a schedule");
      }
      for (const auto& jp : js["schedule"]) {
        if (!jp.is_array() || jp.size() != 3) {
          scen_error(path, where + ": schedule entries must be [begin, end, state]");
        }
        LightPhase ph;
        ph.begin = jp[0].get<double>();
        ph.end = jp[1].get<double>();
        const std::string st = jp[2].get<std::string>();
        if (st == "Red") {
          ph.state = LightState::Red;
        } else if (st == "Yellow") {
          ph.state = LightState::Yellow;
        } else if (st == "Green") {
          ph.state = LightState::Green;
        } else {
          scen_error(path, where + ": unknown light state " + st);
        }
        if (ph.end <= ph.begin) {
          scen_error(path, where + ": schedule interval must have end > begin");
        }
        s.schedule.push_back(ph);
      }
      for (std::size_t i = 1; i < s.schedule.size(); ++i) {
        if (s.schedule[i].begin < s.schedule[i - 1].end) {
          scen_error(path, where + ": schedule intervals must be disjoint and ordered");
        }
      }
    }
    sc.signals.push_back(std::move(s));
    ++sig_idx;
  }

  return sc;
}

SimWorld::SimWorld(Scenario scenario) : scenario_(std::move(scenario)) {
  ego_ = scenario_.ego_spawn;
  ego_.box = {ego_.pose, scenario_.params.ego_length, scenario_.params.ego_width};
  for (const ActorScript& a : scenario_.actors) {
    ActorRuntime rt;
    rt.script = a;
    rt.triggered = !a.trigger_route_s.has_value();
    rt.trigger_time = 0.0;
    actors_.push_back(std::move(rt));
  }
  signal_mon_.resize(scenario_.signals.size());
  for (std::size_t i = 0; i < scenario_.signals.size(); ++i) {
    const TrafficSignal& sig = scenario_.signals[i];
    const Lane* lane = scenario_.map.find(sig.lane_id);
    if (lane != nullptr) {
      signal_mon_[i].stop_line_s = lane->centerline.project(sig.pose.position()).s;
    }
  }
  emergency_since_.assign(actors_.size(), -1.0);
}

double SimWorld::max_engine_accel(double speed) const {
  // (speed, max accel) calibration anchors of the plant.
  static constexpr std::array<std::pair<double, double>, 4> table{
      {{0.0, 4.5}, {10.0, 3.5}, {20.0, 2.2}, {30.0, 1.2}}};
  if (speed <= table.front().first) {
    return table.front().second;
  }
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (speed <= table[i].first) {
      const double t = (speed - table[i - 1].first) / (table[i].first - table[i - 1].first);
      return table[i - 1].second + t * (table[i].second - table[i - 1].second);
    }
  }
  return table.back().second;
}

double SimWorld::drag(double speed) const {
  return 0.1 + 0.005 * speed + 0.001 * speed * speed;
}

double SimWorld::steady_accel(double command, double speed) const {
  const double u = std::clamp(command, -1.0, 1.0);
  const double actuation = u >= 0.0 ? u * max_engine_accel(speed) : u * scenario_.params.max_brake;
  return actuation - drag(speed);
}

void SimWorld::step(const ControlCommand& cmd, double dt) {
  const SimParams& p = scenario_.params;
  if (std::abs(dt - p.tick) > 1e-12) {
    throw std::invalid_argument("step: dt must equal the configured tick");
  }
  const double throttle = std::clamp(cmd.throttle, 0.0, 1.0);
  const double brake = std::clamp(cmd.brake, 0.0, 1.0);
  const double steer = std::clamp(cmd.steering, -p.max_steer, p.max_steer);

  const double target = throttle * max_engine_accel(ego_.speed) - brake * p.max_brake;
  const double alpha = std::exp(-dt / p.throttle_lag_tau);
  actuation_accel_ = target + (actuation_accel_ - target) * alpha;

  double total = actuation_accel_ - (ego_.speed > 0.0 ? drag(ego_.speed) : 0.0);
  if (ego_.speed <= 0.0 && total < 0.0) {
    total = 0.0;
  }
  const double v0 = ego_.speed;
  const double v1 = std::max(0.0, v0 + total * dt);

  const double yaw_rate = v0 / p.wheelbase * std::tan(steer);
  ego_.pose.x += v0 * std::cos(ego_.pose.yaw) * dt;
  ego_.pose.y += v0 * std::sin(ego_.pose.yaw) * dt;
  ego_.pose.yaw = wrap_angle(ego_.pose.yaw + yaw_rate * dt);
  ego_.speed = v1;
  ego_.accel = (v1 - v0) / dt;
  ego_.yaw_rate = yaw_rate;
  ego_.sync_box();
  ego_.box.length = p.ego_length;
  ego_.box.width = p.ego_width;

  ++tick_;
  const double t = time();

  const double ego_route_s = route_progress();
  for (ActorRuntime& a : actors_) {
    if (!a.triggered && a.script.trigger_route_s && ego_route_s >= *a.script.trigger_route_s) {
      a.triggered = true;
      a.trigger_time = t;
    }
  }

  if (!route_complete_) {
    const Pose2D goal = scenario_.route.reference_path.pose_at(scenario_.route.total_length);
    if (std::hypot(ego_.pose.x - goal.x, ego_.pose.y - goal.y) <= p.route_end_radius) {
      route_complete_ = true;
    }
  }
}

ActorState SimWorld::actor_state_at(const ActorRuntime& a, double t) const {
  const auto& wps = a.script.waypoints;
  ActorState st;
  st.category = a.script.category;
  double local = a.triggered ? t - a.trigger_time : -1.0;
  if (!a.triggered || local <= wps.front().t) {
    st.pose = wps.front().pose;
    st.speed = a.triggered && local >= wps.front().t ? wps.front().speed : 0.0;
  } else if (local >= wps.back().t) {
    st.pose = wps.back().pose;
    st.speed = 0.0;
  } else {
    const auto it = std::upper_bound(wps.begin(), wps.end(), local,
                                     [](double v, const ActorWaypoint& w) { return v < w.t; });
    const ActorWaypoint& w1 = *it;
    const ActorWaypoint& w0 = *(it - 1);
    const double u = (local - w0.t) / (w1.t - w0.t);
    st.pose.x = w0.pose.x + u * (w1.pose.x - w0.pose.x);
    st.pose.y = w0.pose.y + u * (w1.pose.y - w0.pose.y);
    st.pose.yaw = wrap_angle(w0.pose.yaw + u * wrap_angle(w1.pose.yaw - w0.pose.yaw));
    st.speed = w0.speed + u * (w1.speed - w0.speed);
  }
  st.box = {st.pose, a.script.length, a.script.width};
  return st;
}

std::vector<ActorState> SimWorld::actor_states() const {
  std::vector<ActorState> out;
  out.reserve(actors_.size());
  const double t = time();
  for (const ActorRuntime& a : actors_) {
    out.push_back(actor_state_at(a, t));
  }
  return out;
}

double SimWorld::route_progress() const {
  if (scenario_.route.reference_path.size() < 2) {
    return 0.0;
  }
  return scenario_.route.reference_path.project(ego_.pose.position()).s;
}

Observation SimWorld::sense(const DegradationConfig& cfg) const {
  Observation obs;
  obs.tick = tick_;
  obs.time = time();
  obs.ego = ego_;
  if (cfg.ego_pos_noise_sigma > 0.0) {
    obs.ego.pose.x += cfg.ego_pos_noise_sigma * counter_gaussian(cfg.seed, tick_, 1000001, 0);
    obs.ego.pose.y += cfg.ego_pos_noise_sigma * counter_gaussian(cfg.seed, tick_, 1000001, 1);
    obs.ego.sync_box();
  }

  const double t = time();
  for (std::size_t i = 0; i < actors_.size(); ++i) {
    const ActorState st = actor_state_at(actors_[i], t);
    const double dist = std::hypot(st.pose.x - ego_.pose.x, st.pose.y - ego_.pose.y);
    if (cfg.detection_range > 0.0 && dist > cfg.detection_range) {
      continue;
    }
    if (cfg.dropout_prob > 0.0 && counter_uniform(cfg.seed, tick_, i, 900) < cfg.dropout_prob) {
      continue;
    }
    DetectedObject det;
    det.category = st.category;
    det.box = st.box;
    det.timestamp = t;
    if (cfg.position_noise_sigma > 0.0) {
      det.box.center.x += cfg.position_noise_sigma * counter_gaussian(cfg.seed, tick_, i, 0);
      det.box.center.y += cfg.position_noise_sigma * counter_gaussian(cfg.seed, tick_, i, 1);
    }
    if (cfg.yaw_noise_sigma > 0.0) {
      det.box.center.yaw =
          wrap_angle(det.box.center.yaw + cfg.yaw_noise_sigma * counter_gaussian(cfg.seed, tick_, i, 2));
    }
    if (cfg.provide_ids) {
      det.id = static_cast<int>(i);
    }
    obs.detections.push_back(det);
  }

  for (std::size_t i = 0; i < scenario_.signals.size(); ++i) {
    const TrafficSignal& sig = scenario_.signals[i];
    SignalObservation so;
    so.index = static_cast<int>(i);
    so.kind = sig.kind;
    so.pose = sig.pose;
    so.lane_id = sig.lane_id;
    so.speed_value = sig.speed_value;
    if (sig.kind == SignalKind::TrafficLight) {
      so.light = sig.state_at(t);
      if (so.light == LightState::Green && cfg.signal_misread_prob > 0.0 &&
          counter_uniform(cfg.seed, tick_, i, 800) < cfg.signal_misread_prob) {
        so.light = LightState::Red;
      }
    }
    obs.signals.push_back(so);
  }
  return obs;
}

void SimWorld::check_collisions(double t, std::vector<RawInfractionEvent>& out) {
  for (ActorRuntime& a : actors_) {
    const ActorState st = actor_state_at(a, t);
    const bool contact = boxes_overlap(ego_.box, st.box);
    if (contact && !a.in_contact) {
      InfractionKind kind = InfractionKind::CollisionVehicle;
      if (st.category == ObjectCategory::Pedestrian) {
        kind = InfractionKind::CollisionPedestrian;
      } else if (st.category == ObjectCategory::Construction) {
        kind = InfractionKind::CollisionStatic;
      }
      out.push_back({kind, t, ego_.pose});
    }
    a.in_contact = contact;
  }
}

void SimWorld::check_signals(double t, std::vector<RawInfractionEvent>& out) {
  const SimParams& p = scenario_.params;
  for (std::size_t i = 0; i < scenario_.signals.size(); ++i) {
    const TrafficSignal& sig = scenario_.signals[i];
    SignalMonitor& mon = signal_mon_[i];
    const Lane* lane = scenario_.map.find(sig.lane_id);
    if (lane == nullptr || sig.kind == SignalKind::SpeedLimit) {
      continue;
    }
    const PathProjection pr = lane->centerline.project(ego_.pose.position());
    if (std::abs(pr.lateral) > lane->width * 0.5 + 1.0) {
      mon.prev_front_s = -1e9;
      continue;
    }
    const double front_s = pr.s + 0.5 * p.ego_length;
    if (sig.kind == SignalKind::StopSign) {
      if (front_s < mon.stop_line_s && mon.stop_line_s - front_s <= p.stop_sign_zone &&
          ego_.speed < p.stop_sign_speed) {
        mon.stopped_in_zone = true;
      }
    }
    const bool crossing = mon.prev_front_s > -1e8 && mon.prev_front_s < mon.stop_line_s &&
                          front_s >= mon.stop_line_s;
    if (crossing && !mon.crossed) {
      mon.crossed = true;
      if (sig.kind == SignalKind::TrafficLight && sig.state_at(t) == LightState::Red) {
        out.push_back({InfractionKind::RedLight, t, ego_.pose});
      }
      if (sig.kind == SignalKind::StopSign && !mon.stopped_in_zone) {
        out.push_back({InfractionKind::StopSign, t, ego_.pose});
      }
    }
    mon.prev_front_s = front_s;
  }
}

void SimWorld::check_min_speed(double t, std::vector<RawInfractionEvent>& out) {
  const SimParams& p = scenario_.params;
  speed_window_.emplace_back(t, ego_.speed);
  while (!speed_window_.empty() && speed_window_.front().first < t - p.min_speed_window) {
    speed_window_.pop_front();
  }
  if (t < p.min_speed_window) {
    return;
  }

  // Clear-road requirement: nothing within 30 m ahead in the route corridor.
  const double ego_s = route_progress();
  for (const ActorRuntime& a : actors_) {
    const ActorState st = actor_state_at(a, t);
    const PathProjection pr = scenario_.route.reference_path.project(st.pose.position());
    if (pr.s > ego_s && pr.s < ego_s + 30.0 && std::abs(pr.lateral) < 2.5) {
      min_speed_active_ = false;
      return;
    }
  }

  double mean = 0.0;
  for (const auto& [ts, v] : speed_window_) {
    mean += v;
  }
  mean /= static_cast<double>(speed_window_.size());

  double limit = 13.89;
  if (!scenario_.route.lane_sequence.empty()) {
    const Lane* lane = scenario_.map.find(scenario_.route.lane_sequence.front());
    if (lane != nullptr) {
      limit = lane->speed_limit;
    }
  }
  const bool violating = mean < p.min_speed_fraction * limit;
  if (violating && !min_speed_active_) {
    out.push_back({InfractionKind::MinSpeed, t, ego_.pose});
  }
  min_speed_active_ = violating;
}

void SimWorld::check_route_rules(double t, std::vector<RawInfractionEvent>& out) {
  const SimParams& p = scenario_.params;
  const PathProjection pr = scenario_.route.reference_path.project(ego_.pose.position());
  if (!deviation_emitted_ && std::abs(pr.lateral) > p.deviation_limit) {
    deviation_emitted_ = true;
    out.push_back({InfractionKind::RouteDeviation, t, ego_.pose});
  }

  position_window_.emplace_back(t, ego_.pose.position());
  while (!position_window_.empty() && position_window_.front().first < t - p.blocked_timeout) {
    position_window_.pop_front();
  }
  if (!blocked_emitted_ && t >= p.blocked_timeout) {
    const Vec2 oldest = position_window_.front().second;
    if ((ego_.pose.position() - oldest).norm() < p.blocked_distance) {
      blocked_emitted_ = true;
      out.push_back({InfractionKind::AgentBlocked, t, ego_.pose});
    }
  }

  if (!timeout_emitted_ && t >= scenario_.duration && !route_complete_) {
    timeout_emitted_ = true;
    out.push_back({InfractionKind::Timeout, t, ego_.pose});
  }
}

void SimWorld::check_emergency(double t, std::vector<RawInfractionEvent>& out) {
  const SimParams& p = scenario_.params;
  const PathProjection ego_pr = scenario_.route.reference_path.project(ego_.pose.position());
  for (std::size_t i = 0; i < actors_.size(); ++i) {
    if (actors_[i].script.category != ObjectCategory::Emergency) {
      continue;
    }
    const ActorState st = actor_state_at(actors_[i], t);
    const Vec2 rel = st.pose.position() - ego_.pose.position();
    const bool behind = rel.dot(ego_.pose.heading()) < 0.0;
    const bool near = rel.norm() <= p.emergency_distance;
    const bool ego_yielded = std::abs(ego_pr.lateral) >= p.emergency_yield_offset;
    if (behind && near && !ego_yielded && st.speed > 0.5) {
      if (emergency_since_[i] < 0.0) {
        emergency_since_[i] = t;
      } else if (t - emergency_since_[i] > p.emergency_timeout) {
        out.push_back({InfractionKind::EmergencyYield, t, ego_.pose});
        emergency_since_[i] = t;  // re-arm, one event per exceeded window
      }
    } else {
      emergency_since_[i] = -1.0;
    }
  }
}

std::vector<RawInfractionEvent> SimWorld::detect_infractions() {
  std::vector<RawInfractionEvent> out;
  const double t = time();
  check_collisions(t, out);
  check_signals(t, out);
  check_min_speed(t, out);
  check_route_rules(t, out);
  check_emergency(t, out);
  return out;
}

}  // namespace drivesim
