#include "drivesim/controller.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace drivesim {

double pid_step(double error, double dt, const PidGains& gains, PidState& state) {
  state.integral = std::clamp(state.integral + error * dt, -gains.integral_clamp, gains.integral_clamp);
  double derivative = 0.0;
  if (!state.first && dt > 0.0) {
    derivative = (error - state.prev_error) / dt;
  }
  state.first = false;
  state.prev_error = error;
  const double out = gains.kp * error + gains.ki * state.integral + gains.kd * derivative;
  return std::clamp(out, -gains.output_clamp, gains.output_clamp);
}

double lateral_control(double heading_error, double dt, const PidGains& gains, PidState& state) {
  return pid_step(wrap_angle(heading_error), dt, gains, state);
}

CalibrationTable::CalibrationTable(std::vector<double> speeds, std::vector<double> accels,
                                   std::vector<double> commands, std::vector<char> saturated)
    : speeds_(std::move(speeds)),
      accels_(std::move(accels)),
      commands_(std::move(commands)),
      saturated_(std::move(saturated)) {
  if (commands_.size() != speeds_.size() * accels_.size()) {
    throw std::invalid_argument("calibration table size mismatch");
  }
}

bool CalibrationTable::saturated_at(std::size_t speed_idx, std::size_t accel_idx) const {
  return saturated_[speed_idx * accels_.size() + accel_idx] != 0;
}

namespace {

std::pair<std::size_t, double> bracket(const std::vector<double>& grid, double v) {
  if (v <= grid.front()) {
    return {0, 0.0};
  }
  if (v >= grid.back()) {
    return {grid.size() - 2, 1.0};
  }
  const auto it = std::upper_bound(grid.begin(), grid.end(), v);
  const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
  return {i, (v - grid[i]) / (grid[i + 1] - grid[i])};
}

}  // namespace

double CalibrationTable::lookup(double speed, double accel) const {
  if (empty() || speeds_.size() < 2 || accels_.size() < 2) {
    throw std::runtime_error("calibration table is empty");
  }
  const auto [si, st] = bracket(speeds_, speed);
  const auto [ai, at] = bracket(accels_, accel);
  const std::size_t n = accels_.size();
  const double c00 = commands_[si * n + ai];
  const double c01 = commands_[si * n + ai + 1];
  const double c10 = commands_[(si + 1) * n + ai];
  const double c11 = commands_[(si + 1) * n + ai + 1];
  const double lo = c00 + at * (c01 - c00);
  const double hi = c10 + at * (c11 - c10);
  return lo + st * (hi - lo);
}

std::string CalibrationTable::to_csv() const {
  std::ostringstream out;
  out << "caltable-v1\n";
  out << "speed,accel,command,saturated\n";
  char buf[96];
  for (std::size_t i = 0; i < speeds_.size(); ++i) {
    for (std::size_t j = 0; j < accels_.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.9f,%d\n", speeds_[i], accels_[j],
                    commands_[i * accels_.size() + j], saturated_[i * accels_.size() + j] ? 1 : 0);
      out << buf;
    }
  }
  return out.str();
}

CalibrationTable CalibrationTable::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "caltable-v1") {
    throw std::runtime_error("calibration table: expected caltable-v1 header");
  }
  std::getline(in, line);  // column header
  std::vector<double> speeds, accels, commands;
  std::vector<char> saturated;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    double s, a, c;
    int sat;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%d", &s, &a, &c, &sat) != 4) {
      throw std::runtime_error("calibration table: bad row: " + line);
    }
    if (speeds.empty() || s > speeds.back()) {
      speeds.push_back(s);
    }
    if (speeds.size() == 1) {
      accels.push_back(a);
    }
    commands.push_back(c);
    saturated.push_back(static_cast<char>(sat));
  }
  return CalibrationTable(std::move(speeds), std::move(accels), std::move(commands),
                          std::move(saturated));
}

CalibrationTable calibrate(const std::function<double(double, double)>& steady_accel,
                           std::vector<double> speeds, std::vector<double> accels) {
  if (speeds.empty()) {
    for (double v = 0.0; v <= 30.0 + 1e-9; v += 2.0) {
      speeds.push_back(v);
    }
  }
  if (accels.empty()) {
    for (double a = -6.0; a <= 4.0 + 1e-9; a += 0.5) {
      accels.push_back(a);
    }
  }
  std::vector<double> commands;
  std::vector<char> saturated;
  commands.reserve(speeds.size() * accels.size());
  for (double v : speeds) {
    for (double a : accels) {
      const double lo_val = steady_accel(-1.0, v);
      const double hi_val = steady_accel(1.0, v);
      if (a <= lo_val) {
        commands.push_back(-1.0);
        saturated.push_back(1);
        continue;
      }
      if (a >= hi_val) {
        commands.push_back(1.0);
        saturated.push_back(1);
        continue;
      }
      double lo = -1.0, hi = 1.0;
      for (int it = 0; it < 48; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (steady_accel(mid, v) < a) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      commands.push_back(0.5 * (lo + hi));
      saturated.push_back(0);
    }
  }
  return CalibrationTable(std::move(speeds), std::move(accels), std::move(commands),
                          std::move(saturated));
}

std::pair<double, double> Controller::longitudinal_control(double target_accel, const EgoState& ego,
                                                           const CalibrationTable& table, double dt) {
  const double feed_forward = table.lookup(ego.speed, target_accel);
  const double correction = pid_step(target_accel - ego.accel, dt, cfg_.longitudinal, longitudinal_state_);
  const double u = std::clamp(feed_forward + correction, -1.0, 1.0);
  if (u >= 0.0) {
    return {u, 0.0};
  }
  return {0.0, -u};
}

ControlCommand Controller::track_trajectory(const TrajectoryCandidate& plan, const EgoState& ego,
                                            const CalibrationTable& table, double dt) {
  ControlCommand cmd;
  if (plan.samples.empty()) {
    cmd.brake = 1.0;
    return cmd;
  }

  // Pure-pursuit style heading reference: bearing to the plan pose one
  // lookahead ahead of the ego's projection onto the plan path.
  const bool has_path = plan.path.polyline().size() >= 2;
  const PathProjection pr = has_path ? plan.path.project(ego.pose.position())
                                     : PathProjection{0.0, 0.0};
  const double lookahead = std::max(cfg_.lookahead_min, ego.speed * cfg_.lookahead_time);
  const Pose2D target = has_path ? plan.path.pose_at(pr.s + lookahead) : plan.samples.back().pose;
  const double bearing = std::atan2(target.y - ego.pose.y, target.x - ego.pose.x);
  const double heading_error = wrap_angle(bearing - ego.pose.yaw);
  cmd.steering = lateral_control(heading_error, dt, cfg_.lateral, lateral_state_);

  // Target acceleration from the plan profile one control step in.
  double target_accel = plan.samples.front().accel;
  double target_speed = plan.samples.front().speed;
  for (const TrajectorySample& s : plan.samples) {
    if (s.t >= dt) {
      target_accel = s.accel;
      target_speed = s.speed;
      break;
    }
  }
  if (plan.emergency) {
    target_accel = plan.accel;
  }
  // Standstill hold: a stopped plan means hold the brake, not idle throttle.
  if (target_speed < 0.05 && ego.speed < 0.5 && !plan.emergency) {
    cmd.throttle = 0.0;
    cmd.brake = 0.35;
    longitudinal_state_.reset();
    return cmd;
  }
  const auto [throttle, brake] = longitudinal_control(target_accel, ego, table, dt);
  cmd.throttle = throttle;
  cmd.brake = brake;
  return cmd;
}

void Controller::reset() {
  lateral_state_.reset();
  longitudinal_state_.reset();
}

}  // namespace drivesim
