#include "drivesim/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace drivesim {

const char* to_string(LaneDecisionKind k) {
  switch (k) {
    case LaneDecisionKind::KeepLane: return "KeepLane";
    case LaneDecisionKind::Bypass: return "Bypass";
    case LaneDecisionKind::ChangeLane: return "ChangeLane";
    case LaneDecisionKind::WaitForGap: return "WaitForGap";
  }
  return "KeepLane";
}

double required_gap(double oncoming_speed, double blocker_length) {
  return 40.0 + 5.0 * oncoming_speed + blocker_length;
}

NegotiationOutcome BehaviorPlanner::negotiate(const EgoState& ego,
                                              const std::vector<Prediction>& predictions,
                                              const RoutePlan& route) const {
  NegotiationOutcome out;
  if (route.reference_path.size() < 2) {
    out.adjusted = predictions;
    return out;
  }
  const double ego_s = route.reference_path.project(ego.pose.position()).s;
  const double corridor_half = 0.5 * (cfg_.ego_width + cfg_.corridor_margin) + 1.0;

  for (const Prediction& pred : predictions) {
    if (pred.samples.empty()) {
      continue;
    }
    const Pose2D now_pose = pred.samples.front().pose;
    const PathProjection pr = route.reference_path.project(now_pose.position());
    const double route_yaw = route.reference_path.yaw_at(pr.s);
    double accel = 0.0;

    const Vec2 rel = now_pose.position() - ego.pose.position();
    const bool behind_ego = rel.dot(ego.pose.heading()) < 0.0;

    if (pred.category == ObjectCategory::Emergency && behind_ego && pred.base_speed > 0.5) {
      accel = cfg_.a_emergency;
    } else if (behind_ego && std::abs(wrap_angle(now_pose.yaw - route_yaw)) < kPi / 4.0 &&
               std::abs(pr.lateral) < corridor_half + 1.0) {
      // follower in the ego corridor
      accel = -cfg_.a_yield;
    } else if (!behind_ego && std::abs(wrap_angle(now_pose.yaw - ego.pose.yaw - kPi)) < kPi / 6.0 &&
               std::abs(pr.lateral) < corridor_half) {
      // head-on in the ego corridor
      accel = -cfg_.a_yield;
    } else {
      // interception of the object's predicted path with the ego reference
      for (const PredictionSample& sample : pred.samples) {
        if (sample.t < 1e-9) {
          continue;
        }
        const PathProjection sp = route.reference_path.project(sample.pose.position());
        if (sp.s <= ego_s || std::abs(sp.lateral) > corridor_half) {
          continue;
        }
        const double t_int = sample.t;
        if (t_int < 0.5) {
          break;  // already on top of us; the object keeps its motion
        }
        // The ego must clear the interception a clearing margin early.
        const double t_eff = std::max(0.3, t_int - cfg_.clearing_margin);
        const double need = sp.s + cfg_.interception_clearance - ego_s;
        const double a_req = 2.0 * (need - ego.speed * t_eff) / (t_eff * t_eff);
        if (a_req >= cfg_.comfort_min && a_req <= cfg_.comfort_max) {
          accel = -cfg_.a_yield;  // the ego can clear first; the object yields
        }
        break;
      }
    }

    out.assumed_accel[pred.track_id] = accel;
    out.adjusted.push_back(accel == 0.0 ? pred : integrate_with_accel(pred, accel));
  }
  return out;
}

std::optional<BehaviorPlanner::FrontObject> BehaviorPlanner::find_front_object(
    const EgoState& ego, const RoutePlan& route, const std::vector<Prediction>& predictions) const {
  const double ego_s = route.reference_path.project(ego.pose.position()).s;
  const double corridor_half = 0.5 * (cfg_.ego_width + cfg_.corridor_margin);
  std::optional<FrontObject> best;
  for (const Prediction& pred : predictions) {
    if (pred.samples.empty()) {
      continue;
    }
    const OrientedBox& box = pred.samples.front().box;
    double lat_lo = std::numeric_limits<double>::infinity();
    double lat_hi = -std::numeric_limits<double>::infinity();
    for (const Vec2& corner : box.corners()) {
      const PathProjection pr = route.reference_path.project(corner);
      lat_lo = std::min(lat_lo, pr.lateral);
      lat_hi = std::max(lat_hi, pr.lateral);
    }
    const PathProjection center = route.reference_path.project(box.center.position());
    if (center.s <= ego_s || center.s > ego_s + cfg_.front_range) {
      continue;
    }
    if (lat_hi < -corridor_half || lat_lo > corridor_half) {
      continue;  // footprint clear of the corridor
    }
    if (!best || center.s < best->s) {
      best = FrontObject{&pred, center.s, center.lateral, lat_lo, lat_hi};
    }
  }
  return best;
}

bool BehaviorPlanner::is_stopped(int track_id, double speed, double now) {
  if (speed < cfg_.stopped_speed) {
    const auto it = stopped_since_.find(track_id);
    if (it == stopped_since_.end()) {
      stopped_since_[track_id] = now;
      return false;
    }
    return now - it->second >= cfg_.stopped_duration;
  }
  stopped_since_.erase(track_id);
  return false;
}

int BehaviorPlanner::route_lane_at(const RoutePlan& route, const LaneMap& map,
                                   const Vec2& position) const {
  int best_id = route.lane_sequence.empty() ? -1 : route.lane_sequence.front();
  double best_lat = std::numeric_limits<double>::infinity();
  for (int id : route.lane_sequence) {
    const Lane* lane = map.find(id);
    if (lane == nullptr || lane->centerline.size() < 2) {
      continue;
    }
    const PathProjection pr = lane->centerline.project(position);
    if (pr.s <= 1e-6 || pr.s >= lane->centerline.length() - 1e-6) {
      continue;  // projection clamped to an end: not on this piece
    }
    if (std::abs(pr.lateral) < best_lat) {
      best_lat = std::abs(pr.lateral);
      best_id = id;
    }
  }
  return best_id;
}

LaneDecision BehaviorPlanner::decide_lane(const EgoState& ego, const RoutePlan& route,
                                          const std::vector<Prediction>& predictions,
                                          const LaneMap& map, double now) {
  const double ego_s = route.reference_path.project(ego.pose.position()).s;

  // Keep a committed avoidance maneuver until its trigger has been passed.
  // The avoidance window tracks the trigger's current position, so bypassing
  // a moving rider keeps the offset alongside it.
  if (held_) {
    bool trigger_alive = false;
    for (const Prediction& p : predictions) {
      if (p.track_id != held_->trigger_track || p.samples.empty()) {
        continue;
      }
      const double obj_s = route.reference_path.project(p.samples.front().pose.position()).s;
      const double obj_rear = obj_s - 0.5 * p.length;
      if (obj_rear + 5.0 > ego_s) {
        trigger_alive = true;
        if (held_->kind == LaneDecisionKind::Bypass) {
          held_->window_begin_s = obj_s - 0.5 * p.length - 8.0;
          held_->window_end_s = obj_s + 0.5 * p.length + 8.0;
        }
      }
    }
    if (trigger_alive) {
      return *held_;
    }
    held_.reset();
  }

  const auto front = find_front_object(ego, route, predictions);
  if (!front) {
    return {};
  }
  const Prediction& obj = *front->pred;
  const bool stopped = is_stopped(obj.track_id, obj.base_speed, now);
  const bool blocker = stopped || obj.category == ObjectCategory::Construction;

  if (!blocker) {
    // Bicycles and pedestrians hugging one side can be bypassed when the
    // residual corridor (lane plus shoulder allowance) is wide enough.
    if (obj.category == ObjectCategory::Bike || obj.category == ObjectCategory::Pedestrian) {
      const int lane_id = route_lane_at(route, map, ego.pose.position());
      const Lane* lane = map.find(lane_id);
      const double half_lane = lane != nullptr ? 0.5 * lane->width : 1.75;
      const double room_left = (half_lane + cfg_.bypass_shoulder) - front->lat_hi;
      const double room_right = front->lat_lo - (-half_lane - cfg_.bypass_shoulder);
      const double need = cfg_.ego_width + cfg_.bypass_margin;
      if (room_left >= need || room_right >= need) {
        LaneDecision d;
        d.kind = LaneDecisionKind::Bypass;
        d.side = room_left >= room_right ? +1 : -1;
        if (d.side > 0) {
          d.offset = front->lat_hi + cfg_.bypass_clearance + 0.5 * cfg_.ego_width;
        } else {
          d.offset = -(front->lat_lo - cfg_.bypass_clearance - 0.5 * cfg_.ego_width);
        }
        const double cap = lane != nullptr ? (lane->width - cfg_.ego_width) / 2.0 + 0.5 : 1.3;
        d.offset = std::clamp(d.offset, 0.0, cap);
        d.trigger_track = obj.track_id;
        d.window_begin_s = front->s - 0.5 * obj.length - 8.0;
        d.window_end_s = front->s + 0.5 * obj.length + 8.0;
        held_ = d;
        return d;
      }
    }
    return {};  // moving front object: keep lane and follow
  }

  // Stopped vehicle or construction: change lane when a neighbor exists.
  const int lane_id = route_lane_at(route, map, ego.pose.position());
  const Lane* lane = map.find(lane_id);
  if (lane == nullptr) {
    return {};
  }
  const std::optional<LaneNeighbor> candidates[2] = {lane->left, lane->right};
  for (const auto& nb : candidates) {
    if (nb && nb->same_direction) {
      LaneDecision d;
      d.kind = LaneDecisionKind::ChangeLane;
      d.target_lane = nb->lane_id;
      d.trigger_track = obj.track_id;
      d.window_begin_s = front->s - 0.5 * obj.length;
      d.window_end_s = front->s + 0.5 * obj.length + 10.0;
      held_ = d;
      return d;
    }
  }
  for (const auto& nb : candidates) {
    if (!nb || nb->same_direction) {
      continue;
    }
    // Opposite-direction borrow: need a long enough oncoming gap first.
    const Lane& opp = map.at(nb->lane_id);
    double nearest_gap = std::numeric_limits<double>::infinity();
    double oncoming_speed = 0.0;
    const PathProjection ego_on_opp = opp.centerline.project(ego.pose.position());
    for (const Prediction& p : predictions) {
      if (p.samples.empty() || p.track_id == obj.track_id) {
        continue;
      }
      const Pose2D pp = p.samples.front().pose;
      const PathProjection pr = opp.centerline.project(pp.position());
      if (std::abs(pr.lateral) > 0.75 * opp.width) {
        continue;
      }
      // Oncoming traffic travels toward decreasing ego-route arc.
      const double gap = std::abs(pr.s - ego_on_opp.s);
      const Vec2 rel = pp.position() - ego.pose.position();
      const bool ahead = rel.dot(ego.pose.heading()) > 0.0;
      if (ahead && gap < nearest_gap) {
        nearest_gap = gap;
        oncoming_speed = p.base_speed;
      }
    }
    LaneDecision d;
    d.target_lane = nb->lane_id;
    d.trigger_track = obj.track_id;
    d.required_gap = required_gap(oncoming_speed, obj.length);
    d.observed_gap = nearest_gap;
    d.window_begin_s = front->s - 0.5 * obj.length;
    d.window_end_s = front->s + 0.5 * obj.length + 10.0;
    if (nearest_gap >= d.required_gap) {
      d.kind = LaneDecisionKind::ChangeLane;
      held_ = d;
    } else {
      d.kind = LaneDecisionKind::WaitForGap;
      d.window_end_s = front->s + 0.5 * obj.length;
    }
    return d;
  }
  return {};  // nowhere to go: keep lane, the planner stops behind the blocker
}

RoutePlan BehaviorPlanner::translate_reference(const RoutePlan& route, const LaneDecision& decision,
                                               const LaneMap& map, double ego_s) const {
  if (decision.kind == LaneDecisionKind::KeepLane || decision.kind == LaneDecisionKind::WaitForGap) {
    return route;
  }
  const Polyline& path = route.reference_path;
  std::vector<Pose2D> out;
  out.reserve(path.size());

  const Lane* target =
      decision.kind == LaneDecisionKind::ChangeLane ? map.find(decision.target_lane) : nullptr;

  for (std::size_t i = 0; i < path.size(); ++i) {
    const Pose2D& p = path.points()[i];
    const double s = path.arc()[i];
    double offset = 0.0;
    if (decision.kind == LaneDecisionKind::Bypass) {
      const double a0 = decision.window_begin_s - cfg_.bypass_taper;
      const double a1 = decision.window_begin_s;
      const double b1 = decision.window_end_s;
      const double b0 = decision.window_end_s + cfg_.bypass_taper;
      double f = 0.0;
      if (s >= a1 && s <= b1) {
        f = 1.0;
      } else if (s > a0 && s < a1) {
        f = (s - a0) / cfg_.bypass_taper;
      } else if (s > b1 && s < b0) {
        f = (b0 - s) / cfg_.bypass_taper;
      }
      offset = f * decision.offset * decision.side;
      if (std::abs(offset) > 0.0) {
        const int lane_id = route.lane_sequence.empty() ? -1 : route.lane_sequence.front();
        const Lane* lane = map.find(lane_id);
        const double cap = lane != nullptr ? (lane->width - cfg_.ego_width) / 2.0 + 0.5 : 1.3;
        if (std::abs(offset) > cap + 1e-9) {
          throw std::runtime_error("bypass offset exceeds the lane envelope");
        }
      }
    } else if (target != nullptr) {
      // Blend anchored so the shift completes ahead of the avoidance window.
      const double done_s = std::max(ego_s + 10.0, decision.window_begin_s - 4.0);
      const double start_s = done_s - cfg_.change_blend;
      double f = 0.0;
      if (s >= done_s) {
        f = 1.0;
      } else if (s > start_s) {
        f = (s - start_s) / cfg_.change_blend;
      }
      if (f > 0.0 && target->centerline.size() >= 2) {
        // Offset measured in the route point's own frame so opposite-direction
        // target lanes shift the correct way.
        const PathProjection pr = target->centerline.project(p.position());
        const Pose2D foot = target->centerline.pose_at(pr.s);
        const double to_target = -std::sin(p.yaw) * (foot.x - p.x) + std::cos(p.yaw) * (foot.y - p.y);
        offset = f * to_target;
      }
    }
    out.push_back({p.x - offset * std::sin(p.yaw), p.y + offset * std::cos(p.yaw), p.yaw});
  }

  RoutePlan translated;
  translated.reference_path = Polyline(std::move(out));
  translated.total_length = translated.reference_path.length();
  translated.lane_sequence = route.lane_sequence;
  return translated;
}

BehaviorOutput BehaviorPlanner::decide(const EgoState& ego, const RoutePlan& route,
                                       const std::vector<Prediction>& predictions,
                                       const LaneMap& map,
                                       const std::vector<SignalObservation>& signals, double now) {
  BehaviorOutput out;
  const double ego_s = route.reference_path.project(ego.pose.position()).s;

  const NegotiationOutcome nego = negotiate(ego, predictions, route);
  out.adjusted = nego.adjusted;
  out.decision = decide_lane(ego, route, out.adjusted, map, now);
  out.translated = translate_reference(route, out.decision, map, ego_s);

  // Speed limit: route lane limit with a 30 m lookahead (slow before entering
  // a slower lane), overridden by the latest passed limit sign.
  double limit = 13.89;
  const int lane_id = route_lane_at(route, map, ego.pose.position());
  if (const Lane* lane = map.find(lane_id)) {
    limit = lane->speed_limit;
  }
  const Pose2D ahead = route.reference_path.pose_at(ego_s + 30.0);
  if (const Lane* lane = map.find(route_lane_at(route, map, ahead.position()))) {
    limit = std::min(limit, lane->speed_limit);
  }
  double best_sign_s = -1.0;
  for (const SignalObservation& so : signals) {
    if (so.kind != SignalKind::SpeedLimit) {
      continue;
    }
    const double sign_s = route.reference_path.project(so.pose.position()).s;
    if (sign_s <= ego_s + 1e-6 && sign_s > best_sign_s && so.speed_value > 0.0) {
      best_sign_s = sign_s;
      limit = so.speed_value;
    }
  }
  out.speed_limit = limit;

  // Stop points: the nearest of gap-wait standoff, red lights, and unserved
  // stop signs ahead.
  std::optional<double> stop_s;
  auto consider = [&](double s) {
    if (s <= ego_s - 0.5) {
      return;
    }
    if (!stop_s || s < *stop_s) {
      stop_s = s;
    }
  };
  if (out.decision.kind == LaneDecisionKind::WaitForGap) {
    consider(out.decision.window_begin_s - cfg_.stop_standoff);
  }
  for (const SignalObservation& so : signals) {
    const double line_s = route.reference_path.project(so.pose.position()).s;
    const double hold_s = line_s - 0.5 * cfg_.ego_length - cfg_.signal_standoff;
    if (so.kind == SignalKind::TrafficLight) {
      if (so.light != LightState::Green && line_s > ego_s - 1.0) {
        consider(hold_s);
      }
    } else if (so.kind == SignalKind::StopSign) {
      bool& served = served_stop_signs_[so.index];
      const double front_s = ego_s + 0.5 * cfg_.ego_length;
      // Release below the rule monitor's stopped threshold, with margin.
      if (!served && line_s - front_s <= 5.0 && line_s - front_s >= -0.5 && ego.speed < 0.05) {
        served = true;
      }
      if (!served && line_s > ego_s - 1.0) {
        consider(hold_s);
      }
    }
  }
  out.stop_s = stop_s;
  return out;
}

}  // namespace drivesim
