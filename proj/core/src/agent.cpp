#include "drivesim/agent.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace drivesim {

Agent::Agent(const LaneMap& map, RoutePlan route, AgentConfig cfg)
    : map_(&map), route_(std::move(route)), cfg_(std::move(cfg)),
      tracker_(cfg_.tracker), behavior_(cfg_.behavior), controller_(cfg_.controller) {}

std::vector<Track> Agent::tracks_from_ids(const std::vector<DetectedObject>& detections, double now) {
  std::vector<Track> out;
  for (const DetectedObject& det : detections) {
    if (!det.id) {
      continue;
    }
    IdentityRecord& rec = identity_[*det.id];
    double speed = 0.0;
    double yaw_rate = 0.0;
    if (rec.seen && now > rec.time + 1e-9) {
      const double dt = now - rec.time;
      speed = std::hypot(det.box.center.x - rec.pose.x, det.box.center.y - rec.pose.y) / dt;
      yaw_rate = wrap_angle(det.box.center.yaw - rec.pose.yaw) / dt;
    }
    rec.pose = det.box.center;
    rec.time = now;
    rec.speed = speed;
    rec.yaw_rate = yaw_rate;
    rec.seen = true;

    Track t;
    t.id = *det.id;
    t.category = det.category;
    t.length = det.box.length;
    t.width = det.box.width;
    t.status = TrackStatus::Active;
    t.hits = 1;
    t.filter.mean << det.box.center.x, det.box.center.y, det.box.center.yaw, speed, yaw_rate;
    t.filter.cov = 1e-6 * StateMat::Identity();
    out.push_back(std::move(t));
  }
  return out;
}

ControlCommand Agent::tick(const Observation& obs, double dt, TickDiagnostics* diag,
                           std::vector<TrajectoryCandidate>* candidates) {
  TickDiagnostics local;
  TickDiagnostics& d = diag != nullptr ? *diag : local;
  d = TickDiagnostics{};
  try {
    const bool ids_available = !obs.detections.empty() && obs.detections.front().id.has_value();
    std::vector<Track> tracks;
    if (cfg_.use_privileged_ids && (ids_available || obs.detections.empty())) {
      tracks = tracks_from_ids(obs.detections, obs.time);
    } else {
      tracks = tracker_.step(obs.detections, dt);
    }
    d.tracks = tracks;

    std::vector<Prediction> predictions;
    predictions.reserve(tracks.size());
    for (const Track& t : tracks) {
      const auto lane = anchor_to_lane(t, *map_, cfg_.predictor);
      predictions.push_back(predict(t, lane, *map_, cfg_.predictor));
    }
    d.predictions = predictions;

    const BehaviorOutput behavior =
        behavior_.decide(obs.ego, route_, predictions, *map_, obs.signals, obs.time);
    d.decision = behavior.decision;
    d.stop_s = behavior.stop_s;
    d.speed_limit = behavior.speed_limit;

    PlanInput input;
    input.ego = obs.ego;
    input.reference = behavior.translated.reference_path;
    input.predictions = behavior.adjusted;
    input.speed_limit = behavior.speed_limit;
    if (behavior.stop_s) {
      const double ego_s = input.reference.project(obs.ego.pose.position()).s;
      input.stop_distance = std::max(0.0, *behavior.stop_s - ego_s);
    }
    const TrajectoryCandidate best = plan(input, cfg_.weights, cfg_.planner, candidates);
    d.candidate_index = best.index;
    d.candidate_costs = best.costs;
    d.candidate_total = best.total_cost;
    d.emergency = best.emergency;

    return controller_.track_trajectory(best, obs.ego, table_, dt);
  } catch (const std::exception& e) {
    d.error = e.what();
    d.emergency = true;
    ControlCommand stop;
    stop.brake = 1.0;
    return stop;
  }
}

namespace {

nlohmann::json pose_json(const Pose2D& p) {
  return {{"x", p.x}, {"y", p.y}, {"yaw", p.yaw}};
}

}  // namespace

std::string candidate_csv_header() {
  return "tick,index,terminal_offset,accel,swift,ljerk,latjerk,ref,safety,total,feasible";
}

RunResult run_route(const Scenario& scenario, const AgentConfig& cfg,
                    const DegradationConfig& degradation) {
  SimWorld world(scenario);
  Agent agent(scenario.map, scenario.route, cfg);
  agent.set_calibration(
      calibrate([&](double u, double v) { return world.steady_accel(u, v); }));

  RunResult result;
  std::vector<Pose2D> trace;
  std::vector<RawInfractionEvent> events;
  trace.push_back(world.ego().pose);

  const double dt = scenario.params.tick;
  const int max_ticks = static_cast<int>(std::lround(scenario.duration / dt)) + 1;
  std::vector<TrajectoryCandidate> candidates;

  for (int tick = 0; tick < max_ticks; ++tick) {
    const Observation obs = world.sense(degradation);
    TickDiagnostics diag;
    const ControlCommand cmd =
        agent.tick(obs, dt, &diag, cfg.dump_candidates ? &candidates : nullptr);
    world.step(cmd, dt);
    const auto tick_events = world.detect_infractions();
    events.insert(events.end(), tick_events.begin(), tick_events.end());
    trace.push_back(world.ego().pose);

    nlohmann::json rec;
    rec["tick"] = tick;
    rec["t"] = world.time();
    rec["ego"] = pose_json(world.ego().pose);
    rec["ego"]["v"] = world.ego().speed;
    rec["ego"]["a"] = world.ego().accel;
    rec["cmd"] = {{"throttle", cmd.throttle}, {"brake", cmd.brake}, {"steer", cmd.steering}};
    rec["decision"] = {{"kind", to_string(diag.decision.kind)},
                       {"trigger", diag.decision.trigger_track},
                       {"required_gap", diag.decision.required_gap},
                       {"observed_gap", std::isfinite(diag.decision.observed_gap)
                                            ? diag.decision.observed_gap
                                            : -1.0}};
    rec["candidate"] = {{"index", diag.candidate_index},
                        {"total", std::isfinite(diag.candidate_total) ? diag.candidate_total : -1.0},
                        {"emergency", diag.emergency}};
    if (diag.stop_s) {
      rec["stop_s"] = *diag.stop_s;
    }
    if (!diag.error.empty()) {
      rec["error"] = diag.error;
    }
    nlohmann::json jtracks = nlohmann::json::array();
    for (const Track& t : diag.tracks) {
      jtracks.push_back({{"id", t.id},
                         {"category", to_string(t.category)},
                         {"x", t.pose().x},
                         {"y", t.pose().y},
                         {"yaw", t.pose().yaw},
                         {"v", t.speed()}});
    }
    rec["tracks"] = jtracks;
    if (!tick_events.empty()) {
      nlohmann::json je = nlohmann::json::array();
      for (const RawInfractionEvent& e : tick_events) {
        je.push_back({{"kind", to_string(e.kind)}, {"t", e.time}});
      }
      rec["events"] = je;
    }
    result.ticklog.push_back(rec.dump());

    if (cfg.dump_candidates) {
      for (const TrajectoryCandidate& c : candidates) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%d,%d,%.3f,%.3f,%.6f,%.6f,%.6f,%.6f,%.6f,%s,%d", tick,
                      c.index, c.terminal_offset, c.accel, c.costs.swift, c.costs.ljerk,
                      c.costs.latjerk, c.costs.ref, c.costs.safety,
                      std::isfinite(c.total_cost) ? std::to_string(c.total_cost).c_str() : "inf",
                      c.feasible ? 1 : 0);
        result.candidate_rows.emplace_back(buf);
      }
    }

    if (world.route_complete() || world.terminally_blocked() || world.time() >= scenario.duration) {
      break;
    }
  }

  result.completed = world.route_complete();
  result.sim_time = world.time();
  const double rc = route_completion(scenario.route, trace);
  result.report = compute_score(rc, events, PenaltyTable{});
  return result;
}

std::string score_report_json(const ScoreReport& report, const std::string& scenario_name,
                              const std::string& preset_name, std::uint64_t seed) {
  nlohmann::json j;
  j["scenario"] = scenario_name;
  j["preset"] = preset_name;
  j["seed"] = seed;
  j["driving_score"] = report.driving_score;
  j["route_completion"] = report.route_completion;
  j["infraction_penalty"] = report.infraction_penalty;
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [kind, n] : report.counts) {
    counts[to_string(kind)] = n;
  }
  j["infractions"] = counts;
  nlohmann::json evs = nlohmann::json::array();
  for (const RawInfractionEvent& e : report.events) {
    evs.push_back({{"kind", to_string(e.kind)},
                   {"t", e.time},
                   {"x", e.location.x},
                   {"y", e.location.y}});
  }
  j["events"] = evs;
  return j.dump(2);
}

}  // namespace drivesim
