#include <cmath>

#include "doctest.h"
#include "drivesim/controller.hpp"
#include "drivesim/sim_world.hpp"

using namespace drivesim;

namespace {

const std::string kData = DRIVESIM_DATA_DIR;

SimWorld make_world() { return SimWorld(Scenario::load(kData + "/straight_road.json")); }

CalibrationTable table_for(const SimWorld& world) {
  return calibrate([&](double u, double v) { return world.steady_accel(u, v); });
}

}  // namespace

TEST_CASE("pid: zero error and zero history give zero output") {
  PidState state;
  const PidGains gains{1.2, 0.05, 0.2, 0.4, 0.6};
  CHECK(lateral_control(0.0, 0.05, gains, state) == 0.0);
}

TEST_CASE("pid: constant error with P-only gains is kp * e, clamped") {
  PidGains gains{1.2, 0.0, 0.0, 0.4, 0.6};
  PidState state;
  CHECK(lateral_control(0.1, 0.05, gains, state) == doctest::Approx(0.12));
  // Clamp engages for large errors.
  PidState state2;
  CHECK(lateral_control(2.0, 0.05, gains, state2) == doctest::Approx(0.6));
}

TEST_CASE("pid outputs stay bounded for arbitrary inputs") {
  PidGains gains{50.0, 20.0, 30.0, 0.4, 0.6};
  PidState state;
  for (int i = 0; i < 100; ++i) {
    const double e = (i % 2 == 0 ? 1.0 : -1.0) * (i * 0.37);
    const double out = lateral_control(e, 0.05, gains, state);
    CHECK(out <= 0.6);
    CHECK(out >= -0.6);
  }
}

TEST_CASE("heading step error settles within one degree in under 3 s on the plant") {
  SimWorld world = make_world();
  const CalibrationTable table = table_for(world);
  Controller ctrl;

  // Bring the ego to ~8 m/s first.
  for (int i = 0; i < 200 && world.ego().speed < 8.0; ++i) {
    ControlCommand cmd;
    cmd.throttle = 0.5;
    world.step(cmd, 0.05);
  }
  // Force a heading offset, then regulate it back to zero with the PID.
  double settle_time = -1.0;
  PidState state;
  const PidGains gains = ctrl.config().lateral;
  bool settled = false;
  while (world.ego().pose.yaw < 0.2) {
    ControlCommand cmd;
    cmd.throttle = 0.4;
    cmd.steering = 0.3;
    world.step(cmd, 0.05);
  }
  const double t1 = world.time();
  double inside_since = -1.0;
  while (world.time() < t1 + 5.0) {
    ControlCommand cmd;
    cmd.throttle = 0.4;
    cmd.steering = lateral_control(-world.ego().pose.yaw, 0.05, gains, state);
    world.step(cmd, 0.05);
    if (std::abs(world.ego().pose.yaw) < kPi / 180.0) {
      if (inside_since < 0.0) {
        inside_since = world.time();
      }
      if (world.time() - inside_since > 0.5) {
        settled = true;
        settle_time = inside_since - t1;
        break;
      }
    } else {
      inside_since = -1.0;
    }
  }
  CHECK(settled);
  CHECK(settle_time < 3.0);
}

TEST_CASE("calibration: zero accel needs a small positive throttle") {
  SimWorld world = make_world();
  const CalibrationTable table = table_for(world);
  const double u = table.lookup(10.0, 0.0);
  CHECK(u > 0.0);
  CHECK(u < 0.2);
}

TEST_CASE("calibration: top accel at high speed is saturated") {
  SimWorld world = make_world();
  const CalibrationTable table = table_for(world);
  const auto& speeds = table.speeds();
  const auto& accels = table.accels();
  CHECK(table.saturated_at(speeds.size() - 1, accels.size() - 1));
  CHECK(table.lookup(30.0, 4.0) == doctest::Approx(1.0));
}

TEST_CASE("calibration: command is monotone in accel at fixed speed") {
  SimWorld world = make_world();
  const CalibrationTable table = table_for(world);
  for (double v = 0.0; v <= 30.0; v += 2.0) {
    double prev = -2.0;
    for (double a = -6.0; a <= 4.0; a += 0.5) {
      const double u = table.lookup(v, a);
      CHECK(u >= prev - 1e-9);
      prev = u;
    }
  }
}

TEST_CASE("calibration: the inverse actually matches the plant steady state") {
  SimWorld world = make_world();
  const CalibrationTable table = table_for(world);
  for (double v : {2.0, 8.0, 14.0, 22.0}) {
    for (double a : {-3.0, -1.0, 0.0, 1.0}) {
      const double u = table.lookup(v, a);
      CHECK(world.steady_accel(u, v) == doctest::Approx(a).epsilon(1e-6));
    }
  }
}

TEST_CASE("calibration is idempotent") {
  SimWorld world = make_world();
  const CalibrationTable a = table_for(world);
  const CalibrationTable b = table_for(world);
  REQUIRE(a.commands().size() == b.commands().size());
  for (std::size_t i = 0; i < a.commands().size(); ++i) {
    CHECK(std::abs(a.commands()[i] - b.commands()[i]) < 1e-3);
  }
}

TEST_CASE("calibration csv round-trips") {
  SimWorld world = make_world();
  const CalibrationTable a = table_for(world);
  const CalibrationTable b = CalibrationTable::from_csv(a.to_csv());
  REQUIRE(a.commands().size() == b.commands().size());
  for (std::size_t i = 0; i < a.commands().size(); ++i) {
    CHECK(a.commands()[i] == doctest::Approx(b.commands()[i]).epsilon(1e-9));
  }
  CHECK_THROWS(CalibrationTable::from_csv("not-a-table\n"));
}

TEST_CASE("longitudinal: large negative target means full brake, zero throttle") {
  SimWorld world = make_world();
  const CalibrationTable table = table_for(world);
  Controller ctrl;
  EgoState ego;
  ego.speed = 15.0;
  ego.accel = 0.0;
  const auto [throttle, brake] = ctrl.longitudinal_control(-8.0, ego, table, 0.05);
  CHECK(throttle == 0.0);
  CHECK(brake == doctest::Approx(1.0));
}

TEST_CASE("throttle and brake are mutually exclusive") {
  SimWorld world = make_world();
  const CalibrationTable table = table_for(world);
  Controller ctrl;
  EgoState ego = world.ego();
  for (double target = -6.0; target <= 4.0; target += 0.25) {
    const auto [throttle, brake] = ctrl.longitudinal_control(target, ego, table, 0.05);
    CHECK(throttle * brake == 0.0);
    CHECK(throttle >= 0.0);
    CHECK(throttle <= 1.0);
    CHECK(brake >= 0.0);
    CHECK(brake <= 1.0);
  }
}

TEST_CASE("closed-loop speed tracking of a 0 to 10 m/s ramp") {
  SimWorld world = make_world();
  const CalibrationTable table = table_for(world);
  Controller ctrl;
  // Ramp: accelerate at 1 m/s^2 for 10 s, then hold.
  double max_err_after_settle = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double t = i * 0.05;
    const double target_accel = t < 10.0 ? 1.0 : 0.0;
    const auto [throttle, brake] = ctrl.longitudinal_control(target_accel, world.ego(), table, 0.05);
    ControlCommand cmd;
    cmd.throttle = throttle;
    cmd.brake = brake;
    world.step(cmd, 0.05);
    if (t > 12.0) {
      max_err_after_settle = std::max(max_err_after_settle, std::abs(world.ego().speed - 10.0));
    }
  }
  CHECK(max_err_after_settle < 0.5);
}

TEST_CASE("track_trajectory: on-plan ego gets near-zero steering and feed-forward throttle") {
  SimWorld world = make_world();
  const CalibrationTable table = table_for(world);
  Controller ctrl;

  TrajectoryCandidate plan;
  Polyline line;
  line.append({5.0, 0.0, 0.0});
  line.append({120.0, 0.0, 0.0});
  plan.path = CandidatePath::from_polyline(line);
  for (int k = 0; k <= 30; ++k) {
    TrajectorySample s;
    s.t = 0.2 * k;
    s.speed = 5.0 + 1.0 * s.t;
    s.accel = 1.0;
    s.pose = {5.0 + 5.0 * s.t + 0.5 * s.t * s.t, 0.0, 0.0};
    plan.samples.push_back(s);
  }
  EgoState ego;
  ego.pose = {5.0, 0.0, 0.0};
  ego.speed = 5.0;
  ego.accel = 1.0;
  const ControlCommand cmd = ctrl.track_trajectory(plan, ego, table, 0.05);
  CHECK(std::abs(cmd.steering) < 1e-6);
  CHECK(cmd.throttle > 0.0);
  CHECK(cmd.brake == 0.0);

  // Offset ego corrects back toward the plan.
  Controller ctrl2;
  EgoState offset_ego = ego;
  offset_ego.pose.y = 0.5;
  const ControlCommand corr = ctrl2.track_trajectory(plan, offset_ego, table, 0.05);
  CHECK(corr.steering < -1e-4);  // steer right, toward the line
}
