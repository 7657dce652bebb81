#include <random>

#include "doctest.h"
#include "drivesim/scoring.hpp"

using namespace drivesim;

namespace {

RoutePlan straight_route(double length) {
  std::vector<Pose2D> pts;
  for (double s = 0.0; s <= length + 1e-9; s += 5.0) {
    pts.push_back({s, 0.0, 0.0});
  }
  RoutePlan r;
  r.reference_path = Polyline(pts);
  r.total_length = r.reference_path.length();
  r.lane_sequence = {1};
  return r;
}

RawInfractionEvent ev(InfractionKind k) { return {k, 0.0, {}}; }

}  // namespace

TEST_CASE("worked example: RC 10 with one 0.5 infraction gives DS 5") {
  PenaltyTable table;
  table.coeff[InfractionKind::CollisionPedestrian] = 0.5;
  const ScoreReport r = compute_score(10.0, {ev(InfractionKind::CollisionPedestrian)}, table);
  CHECK(r.driving_score == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("worked example: RC 40 with four 0.5 infractions gives DS 2.5") {
  PenaltyTable table;
  table.coeff[InfractionKind::CollisionPedestrian] = 0.5;
  const std::vector<RawInfractionEvent> events(4, ev(InfractionKind::CollisionPedestrian));
  const ScoreReport r = compute_score(40.0, events, table);
  CHECK(r.driving_score == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("perfect run scores 100") {
  const ScoreReport r = compute_score(100.0, {}, PenaltyTable{});
  CHECK(r.driving_score == 100.0);
  CHECK(r.infraction_penalty == 1.0);
}

TEST_CASE("unknown event kind errors") {
  PenaltyTable table;
  table.coeff.erase(InfractionKind::Timeout);
  CHECK_THROWS(compute_score(50.0, {ev(InfractionKind::Timeout)}, table));
}

TEST_CASE("DS equals RC times IS to machine precision; order independent") {
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> rc_dist(0.0, 100.0);
  std::uniform_int_distribution<int> n_events(0, 6);
  std::uniform_int_distribution<int> kind_pick(0, 4);
  const InfractionKind kinds[] = {InfractionKind::CollisionPedestrian,
                                  InfractionKind::CollisionVehicle, InfractionKind::RedLight,
                                  InfractionKind::StopSign, InfractionKind::MinSpeed};
  PenaltyTable table;
  for (int i = 0; i < 200; ++i) {
    std::vector<RawInfractionEvent> events;
    const int n = n_events(rng);
    for (int k = 0; k < n; ++k) {
      events.push_back(ev(kinds[kind_pick(rng)]));
    }
    const double rc = rc_dist(rng);
    const ScoreReport a = compute_score(rc, events, table);
    CHECK(a.driving_score == rc * a.infraction_penalty);
    std::vector<RawInfractionEvent> shuffled = events;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const ScoreReport b = compute_score(rc, shuffled, table);
    CHECK(a.infraction_penalty == doctest::Approx(b.infraction_penalty).epsilon(1e-15));
    // Any extra event strictly decreases DS (all defaults are below 1).
    if (rc > 0.0) {
      std::vector<RawInfractionEvent> more = events;
      more.push_back(ev(InfractionKind::RedLight));
      CHECK(compute_score(rc, more, table).driving_score < a.driving_score);
    }
  }
}

TEST_CASE("the more-progress-lower-score paradox is reproducible") {
  // Same infractions per km; the agent that drives further scores lower.
  PenaltyTable table;
  table.coeff[InfractionKind::CollisionVehicle] = 0.5;
  const ScoreReport slow = compute_score(10.0, {ev(InfractionKind::CollisionVehicle)}, table);
  const std::vector<RawInfractionEvent> four(4, ev(InfractionKind::CollisionVehicle));
  const ScoreReport far = compute_score(40.0, four, table);
  CHECK(far.route_completion > slow.route_completion);
  CHECK(far.driving_score < slow.driving_score);
}

TEST_CASE("route completion basics") {
  const RoutePlan route = straight_route(200.0);
  SUBCASE("never moved") {
    CHECK(route_completion(route, {{0, 0, 0}}) == doctest::Approx(0.0));
  }
  SUBCASE("midpoint of a 200 m route is 50") {
    CHECK(route_completion(route, {{0, 0, 0}, {100.0, 0.0, 0}}) == doctest::Approx(50.0));
  }
  SUBCASE("full traversal is 100") {
    std::vector<Pose2D> trace;
    for (double s = 0; s <= 200.0; s += 2.0) {
      trace.push_back({s, 0.3, 0});
    }
    CHECK(route_completion(route, trace) == doctest::Approx(100.0));
  }
  SUBCASE("monotone in trace prefix") {
    std::vector<Pose2D> trace;
    double prev = 0.0;
    for (double s = 0; s <= 150.0; s += 10.0) {
      trace.push_back({s, 0.0, 0});
      const double rc = route_completion(route, trace);
      CHECK(rc >= prev);
      prev = rc;
    }
  }
  SUBCASE("backtracking earns no extra credit") {
    const double fwd = route_completion(route, {{0, 0, 0}, {80.0, 0.0, 0}});
    const double back = route_completion(route, {{0, 0, 0}, {80.0, 0.0, 0}, {20.0, 0.0, 0}});
    CHECK(fwd == back);
  }
  SUBCASE("empty trace errors") {
    CHECK_THROWS(route_completion(route, {}));
  }
}

TEST_CASE("aggregate averages per route") {
  ScoreReport a = compute_score(100.0, {}, PenaltyTable{});
  ScoreReport b = compute_score(50.0, {ev(InfractionKind::CollisionVehicle)}, PenaltyTable{});
  SUBCASE("single report is itself") {
    const ScoreSummary s = aggregate({a});
    CHECK(s.mean_ds == a.driving_score);
    CHECK(s.routes == 1);
  }
  SUBCASE("two reports average") {
    const ScoreSummary s = aggregate({a, b});
    CHECK(s.mean_ds == doctest::Approx(0.5 * (a.driving_score + b.driving_score)));
  }
  SUBCASE("per-kind counts average like the table convention") {
    // 31 vehicle collisions over 18 routes -> 1.72 per route.
    std::vector<ScoreReport> reports;
    int remaining = 31;
    for (int i = 0; i < 18; ++i) {
      const int here = std::min(remaining, 2);
      remaining -= here;
      std::vector<RawInfractionEvent> events(here, ev(InfractionKind::CollisionVehicle));
      reports.push_back(compute_score(80.0, events, PenaltyTable{}));
    }
    REQUIRE(remaining == 0);
    const ScoreSummary s = aggregate(reports);
    CHECK(s.events_per_route.at(InfractionKind::CollisionVehicle) ==
          doctest::Approx(31.0 / 18.0).epsilon(1e-12));
    CHECK(s.events_per_route.at(InfractionKind::CollisionVehicle) == doctest::Approx(1.72).epsilon(0.005));
  }
  SUBCASE("empty list errors") {
    CHECK_THROWS(aggregate({}));
  }
}

TEST_CASE("csv columns follow the fixed order") {
  CHECK(score_csv_header("exp") == "exp,DS,RC,IS,Ped,Veh,Stat,Red,Stop,Dev,Spd,Emrg,Block");
}
