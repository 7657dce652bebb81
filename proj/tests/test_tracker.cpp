#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "drivesim/tracker.hpp"

using namespace drivesim;

namespace {

DetectedObject make_det(double x, double y, double yaw, ObjectCategory cat = ObjectCategory::Car,
                        double t = 0.0) {
  DetectedObject d;
  d.category = cat;
  d.box = {{x, y, yaw}, 4.5, 1.9};
  d.timestamp = t;
  return d;
}

}  // namespace

TEST_CASE("track activates after exactly TIME_TO_INIT consecutive hits") {
  Tracker tracker;
  const int time_to_init = tracker.config().lifecycle_for(ObjectCategory::Car).time_to_init;
  const double dt = 0.05;
  for (int tick = 1; tick <= time_to_init + 2; ++tick) {
    const auto active = tracker.step({make_det(10.0, 0.0, 0.0)}, dt);
    if (tick < time_to_init) {
      CHECK(active.empty());
    } else {
      REQUIRE(active.size() == 1);
      CHECK(active[0].status == TrackStatus::Active);
    }
  }
}

TEST_CASE("pedestrians activate faster than cars") {
  Tracker tracker;
  const int ped_init = tracker.config().lifecycle_for(ObjectCategory::Pedestrian).time_to_init;
  const int car_init = tracker.config().lifecycle_for(ObjectCategory::Car).time_to_init;
  CHECK(ped_init < car_init);
  CHECK(tracker.config().lifecycle_for(ObjectCategory::Pedestrian).max_active_time >
        tracker.config().lifecycle_for(ObjectCategory::Car).max_active_time);

  for (int tick = 1; tick <= ped_init; ++tick) {
    const auto active = tracker.step({make_det(5.0, 2.0, 0.0, ObjectCategory::Pedestrian)}, 0.05);
    if (tick == ped_init) {
      REQUIRE(active.size() == 1);
      CHECK(active[0].category == ObjectCategory::Pedestrian);
    }
  }
}

TEST_CASE("track drops after exactly MAX_ACTIVE_TIME consecutive misses") {
  Tracker tracker;
  const auto& life = tracker.config().lifecycle_for(ObjectCategory::Car);
  for (int tick = 0; tick < life.time_to_init; ++tick) {
    tracker.step({make_det(10.0, 0.0, 0.0)}, 0.05);
  }
  REQUIRE(tracker.tracks().size() == 1);

  for (int miss = 1; miss <= life.max_active_time; ++miss) {
    tracker.step({}, 0.05);
    if (miss < life.max_active_time) {
      CHECK(tracker.tracks().size() == 1);
      CHECK(tracker.tracks()[0].misses == miss);
    } else {
      CHECK(tracker.tracks().empty());
    }
  }
}

TEST_CASE("ids are never reused") {
  Tracker tracker;
  const auto& life = tracker.config().lifecycle_for(ObjectCategory::Car);
  tracker.step({make_det(0.0, 0.0, 0.0)}, 0.05);
  const int first_id = tracker.tracks()[0].id;
  for (int i = 0; i < life.max_active_time; ++i) {
    tracker.step({}, 0.05);
  }
  REQUIRE(tracker.tracks().empty());
  tracker.step({make_det(0.0, 0.0, 0.0)}, 0.05);
  CHECK(tracker.tracks()[0].id > first_id);
}

TEST_CASE("category mismatch is never matched") {
  Tracker tracker;
  for (int i = 0; i < 4; ++i) {
    tracker.step({make_det(0.0, 0.0, 0.0, ObjectCategory::Car)}, 0.05);
  }
  REQUIRE(tracker.tracks().size() == 1);
  // Same place, different category: must spawn a second track, not update.
  tracker.step({make_det(0.0, 0.0, 0.0, ObjectCategory::Pedestrian)}, 0.05);
  CHECK(tracker.tracks().size() == 2);
}

TEST_CASE("gate blocks distant detections") {
  Tracker tracker;
  for (int i = 0; i < 4; ++i) {
    tracker.step({make_det(0.0, 0.0, 0.0)}, 0.05);
  }
  REQUIRE(tracker.tracks().size() == 1);
  tracker.step({make_det(100.0, 0.0, 0.0)}, 0.05);
  CHECK(tracker.tracks().size() == 2);
  CHECK(tracker.tracks()[0].misses == 1);
}

TEST_CASE("two well-separated objects keep ids over noisy ticks") {
  Tracker tracker;
  std::mt19937 rng(51);
  std::normal_distribution<double> noise(0.0, 0.15);
  const double dt = 0.05;

  int id_a = -1, id_b = -1;
  int switches = 0;
  for (int tick = 0; tick < 100; ++tick) {
    const double t = tick * dt;
    // Object A eastbound at 8 m/s, object B 30 m north going west at 6 m/s.
    const auto det_a = make_det(8.0 * t + noise(rng), noise(rng), 0.0, ObjectCategory::Car, t);
    const auto det_b = make_det(50.0 - 6.0 * t + noise(rng), 30.0 + noise(rng), kPi, ObjectCategory::Car, t);
    const auto active = tracker.step({det_a, det_b}, dt);
    if (active.size() == 2) {
      const Track& near_a = active[0].pose().y < 15.0 ? active[0] : active[1];
      const Track& near_b = active[0].pose().y < 15.0 ? active[1] : active[0];
      if (id_a < 0) {
        id_a = near_a.id;
        id_b = near_b.id;
      } else if (near_a.id != id_a || near_b.id != id_b) {
        ++switches;
      }
    }
  }
  CHECK(id_a >= 0);
  CHECK(switches == 0);

  // Speed estimates should approach the true magnitudes.
  bool saw_speed = false;
  for (const Track& t : tracker.tracks()) {
    if (t.pose().y < 15.0) {
      CHECK(t.speed() == doctest::Approx(8.0).epsilon(0.15));
      saw_speed = true;
    }
  }
  CHECK(saw_speed);
}
