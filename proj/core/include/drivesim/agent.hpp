#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drivesim/behavior.hpp"
#include "drivesim/controller.hpp"
#include "drivesim/motion_planner.hpp"
#include "drivesim/predictor.hpp"
#include "drivesim/scoring.hpp"
#include "drivesim/sim_world.hpp"
#include "drivesim/tracker.hpp"

namespace drivesim {

// Module switches and per-module configs. Every switch combination is valid;
// the degradation config decides what information actually arrives.
struct AgentConfig {
  bool use_privileged_ids{true};  // bypass the tracker when detections carry ids
  CostWeights weights;
  TrackerConfig tracker;
  PredictorConfig predictor;
  BehaviorConfig behavior;
  PlannerConfig planner;
  ControllerConfig controller;
  bool dump_candidates{false};
};

struct TickDiagnostics {
  std::vector<Track> tracks;
  std::vector<Prediction> predictions;
  LaneDecision decision;
  std::optional<double> stop_s;
  double speed_limit{0.0};
  int candidate_index{-1};
  CostTerms candidate_costs;
  double candidate_total{0.0};
  bool emergency{false};
  std::string error;
};

// One agent instance per simulation; single threaded. The module chain runs
// in fixed order: tracks -> predictions -> behavior -> plan -> control.
class Agent {
 public:
  Agent(const LaneMap& map, RoutePlan route, AgentConfig cfg);

  void set_calibration(CalibrationTable table) { table_ = std::move(table); }

  // Any module failure yields an emergency brake command with the cause in
  // the diagnostics.
  ControlCommand tick(const Observation& obs, double dt, TickDiagnostics* diag = nullptr,
                      std::vector<TrajectoryCandidate>* candidates = nullptr);

 private:
  std::vector<Track> tracks_from_ids(const std::vector<DetectedObject>& detections, double now);

  const LaneMap* map_;
  RoutePlan route_;
  AgentConfig cfg_;
  Tracker tracker_;
  BehaviorPlanner behavior_;
  Controller controller_;
  CalibrationTable table_;

  struct IdentityRecord {
    Pose2D pose;
    double time{0.0};
    double speed{0.0};
    double yaw_rate{0.0};
    bool seen{false};
  };
  std::map<int, IdentityRecord> identity_;
};

struct RunResult {
  ScoreReport report;
  std::vector<std::string> ticklog;         // JSON lines, one per tick
  std::vector<std::string> candidate_rows;  // CSV rows when dump_candidatesetc
  bool completed{false};
  double sim_time{0.0};
};

// Full closed loop until route end, scenario duration, block, or deviation.
RunResult run_route(const Scenario& scenario, const AgentConfig& cfg,
                    const DegradationConfig& degradation);

std::string score_report_json(const ScoreReport& report, const std::string& scenario_name,
                              const std::string& preset_name, std::uint64_t seed);

std::string candidate_csv_header();

}  // namespace drivesim
