#pragma once

#include <functional>
#include <string>
#include <vector>

#include "drivesim/motion_planner.hpp"
#include "drivesim/types.hpp"

namespace drivesim {

struct PidGains {
  double kp{0.0};
  double ki{0.0};
  double kd{0.0};
  double integral_clamp{1.0};
  double output_clamp{1.0};
};

struct PidState {
  double integral{0.0};
  double prev_error{0.0};
  bool first{true};

  void reset() { *this = PidState{}; }
};

double pid_step(double error, double dt, const PidGains& gains, PidState& state);

// Steering from heading error; PID with clamped integral and output.
double lateral_control(double heading_error, double dt, const PidGains& gains, PidState& state);

// (speed, accel) -> signed longitudinal command in [-1, 1]; positive maps to
// throttle, negative to brake. Monotone in accel at fixed speed.
class CalibrationTable {
 public:
  CalibrationTable() = default;
  CalibrationTable(std::vector<double> speeds, std::vector<double> accels,
                   std::vector<double> commands, std::vector<char> saturated);

  double lookup(double speed, double accel) const;  // bilinear, clamped to edges
  bool saturated_at(std::size_t speed_idx, std::size_t accel_idx) const;
  const std::vector<double>& speeds() const { return speeds_; }
  const std::vector<double>& accels() const { return accels_; }
  const std::vector<double>& commands() const { return commands_; }
  bool empty() const { return commands_.empty(); }

  // "caltable-v1" CSV persistence so runs skip recalibration.
  std::string to_csv() const;
  static CalibrationTable from_csv(const std::string& text);

 private:
  std::vector<double> speeds_;
  std::vector<double> accels_;
  std::vector<double> commands_;  // speeds x accels, row-major by speed
  std::vector<char> saturated_;
};

// Builds the feed-forward table by bisecting the plant's steady-state
// response at each (speed, accel) grid point. Cells the plant cannot reach
// are marked saturated and clamped to the command limit.
CalibrationTable calibrate(const std::function<double(double, double)>& steady_accel,
                           std::vector<double> speeds = {}, std::vector<double> accels = {});

struct ControllerConfig {
  PidGains lateral{1.2, 0.05, 0.2, 0.4, 0.6};
  PidGains longitudinal{0.5, 0.1, 0.0, 0.5, 1.0};
  double lookahead_time{0.5};
  double lookahead_min{3.0};
};

// Decoupled lateral/longitudinal trajectory tracking with mutable PID state.
class Controller {
 public:
  explicit Controller(ControllerConfig cfg = {}) : cfg_(std::move(cfg)) {}

  std::pair<double, double> longitudinal_control(double target_accel, const EgoState& ego,
                                                 const CalibrationTable& table, double dt);

  ControlCommand track_trajectory(const TrajectoryCandidate& plan, const EgoState& ego,
                                  const CalibrationTable& table, double dt);

  void reset();
  const ControllerConfig& config() const { return cfg_; }

 private:
  ControllerConfig cfg_;
  PidState lateral_state_;
  PidState longitudinal_state_;
};

}  // namespace drivesim
