// Closed-loop regression runs over the bundled fixtures under the privileged
// preset: every scenario must finish clean.

#include "doctest.h"
#include "drivesim/agent.hpp"

using namespace drivesim;

namespace {

const std::string kData = DRIVESIM_DATA_DIR;

RunResult run_fixture(const std::string& name, double detection_range = 0.0) {
  const Scenario sc = Scenario::load(kData + "/" + name);
  AgentConfig cfg;
  DegradationConfig deg;
  deg.provide_ids = true;
  deg.detection_range = detection_range;
  return run_route(sc, cfg, deg);
}

}  // namespace

TEST_CASE("emergency vehicle is yielded to without contact") {
  const RunResult run = run_fixture("emergency_yield.json");
  CHECK(run.completed);
  CHECK(run.report.driving_score == doctest::Approx(100.0));
  CHECK(run.report.counts.count(InfractionKind::EmergencyYield) == 0);
  CHECK(run.report.counts.count(InfractionKind::CollisionVehicle) == 0);
}

TEST_CASE("construction blocker is passed via the same-direction neighbor lane") {
  const RunResult run = run_fixture("construction_change.json");
  CHECK(run.completed);
  CHECK(run.report.driving_score == doctest::Approx(100.0));
  CHECK(run.report.counts.count(InfractionKind::CollisionStatic) == 0);
}

TEST_CASE("oncoming-lane borrow waits for the gap and completes") {
  const RunResult run = run_fixture("bypass_oncoming.json");
  CHECK(run.completed);
  CHECK(run.report.driving_score == doctest::Approx(100.0));
}

TEST_CASE("range-limited perception rams the unseen oncoming car") {
  // The same borrow with detection capped at 32 m commits blindly.
  const RunResult run = run_fixture("bypass_oncoming.json", 32.0);
  CHECK(run.report.counts.count(InfractionKind::CollisionVehicle) == 1);
  CHECK(run.report.driving_score < 100.0);
}
