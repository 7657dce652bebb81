#pragma once

#include <string>
#include <vector>

#include "drivesim/lane_map.hpp"
#include "drivesim/motion_planner.hpp"

namespace drivesim {

struct ExpertDemo {
  EgoState ego;                          // context at the window start
  Polyline reference;                    // reference path the planner runs on
  std::vector<Prediction> predictions;   // other objects' recorded futures
  std::vector<TrajectorySample> expert;  // expert motion resampled on the planner grid
  double speed_limit{13.89};
};

struct TrainConfig {
  double lambda{1e-3};
  double eta0{0.1};
  double eta_exponent{0.5};  // step size eta0 / k^exponent, k = epoch
  int epochs{60};
  std::vector<double> gamma_grid{0.1, 0.25, 0.5, 1.0, 2.0, 4.0};
  double loss_scale{1.0};
  int holdout_every{4};  // every n-th demo goes to the holdout split
  PlannerConfig planner;
};

struct IngestResult {
  std::vector<ExpertDemo> demos;
  int skipped_short{0};  // tracks shorter than the planner horizon
};

struct TrainedWeights {
  CostWeights weights;  // normalized so the largest component is 1
  double holdout_loss{0.0};
  double holdout_match_rate{0.0};
  std::vector<std::pair<double, double>> gamma_losses;  // (gamma, holdout loss)
  std::vector<double> objective_history;                // per epoch, chosen gamma
};

struct ImitationEval {
  double mean_loss{0.0};
  double match_rate{0.0};  // planned candidate == loss-nearest candidate
};

// demos-v1 track tables: trackId,frame,x,y,heading,speed,length,width,category
// at 25 frames per second. One demo per consecutive horizon-length window of
// each lane-anchored vehicle track; other tracks in the window become context.
IngestResult ingest_demos(const std::vector<std::string>& csv_paths, const LaneMap& map,
                          const TrainConfig& cfg = {});

// The five planner cost terms of a trajectory, unit weights, shared code path
// with evaluate_costs.
CostTerms features(const std::vector<TrajectorySample>& trajectory, const ExpertDemo& demo,
                   double gamma);

// Mean per-sample position distance, scaled.
double trajectory_loss(const std::vector<TrajectorySample>& a,
                       const std::vector<TrajectorySample>& b, double scale);

// Maximum margin training: projected subgradient descent on the structured
// hinge loss with the finite candidate set as the exact inner minimizer;
// gamma picked by grid search on held-out plan loss.
TrainedWeights mmp_train(const std::vector<ExpertDemo>& demos, const TrainConfig& cfg);

ImitationEval evaluate_imitation(const CostWeights& weights, const std::vector<ExpertDemo>& demos,
                                 const TrainConfig& cfg);

std::string weights_to_json(const TrainedWeights& tw);
CostWeights weights_from_json(const std::string& text);

// Serializes ground-truth object tables into the demos-v1 format (the
// simulator's log exporter).
struct DemoTrackRow {
  int track_id{0};
  int frame{0};
  double x{0.0};
  double y{0.0};
  double heading{0.0};
  double speed{0.0};
  double length{4.5};
  double width{1.9};
  ObjectCategory category{ObjectCategory::Car};
};
std::string write_demo_csv(const std::vector<DemoTrackRow>& rows);

// Deterministic synthetic demo suite: contexts on the provided lane, experts
// produced by the planner under the generating weights. min_margin > 0 keeps
// only contexts whose expert beats the runner-up by that cost margin.
std::vector<ExpertDemo> generate_synthetic_demos(int count, const CostWeights& generating,
                                                 const LaneMap& map, int lane_id,
                                                 const TrainConfig& cfg, std::uint64_t seed,
                                                 double min_margin = 0.0);

// The same suite as demos-v1 rows for the CSV pipeline.
std::vector<DemoTrackRow> synthetic_demo_rows(const std::vector<ExpertDemo>& demos);

}  // namespace drivesim
