#pragma once

#include <optional>
#include <vector>

#include "drivesim/lane_map.hpp"
#include "drivesim/predictor.hpp"
#include "drivesim/types.hpp"

namespace drivesim {

// The IRL-learned artifact: five cost weights plus the safety falloff gamma.
// Defaults are hand-tuned stand-ins of the same scale the trainer produces.
struct CostWeights {
  double swift{0.004};
  double ljerk{0.0015};
  double latjerk{0.0015};
  double ref{0.01};
  double safety{1.0};
  double gamma{1.5};
};

struct CostTerms {
  double swift{0.0};
  double ljerk{0.0};
  double latjerk{0.0};
  double ref{0.0};
  double safety{0.0};

  double weighted(const CostWeights& w) const {
    return w.swift * swift + w.ljerk * ljerk + w.latjerk * latjerk + w.ref * ref + w.safety * safety;
  }
};

struct TrajectorySample {
  double t{0.0};
  Pose2D pose;
  double speed{0.0};
  double accel{0.0};  // effective accel: forward difference of sampled speed
  OrientedBox box;
};

// Candidate geometry: an analytic quartic Bezier blend followed by the offset
// reference. pose_at solves arc length -> curve parameter exactly, so sampled
// derivatives stay grid-stable; a cached polyline serves projection and
// curvature queries.
class CandidatePath {
 public:
  CandidatePath() = default;
  static CandidatePath blend_then_tail(const std::array<Vec2, 5>& ctrl, Polyline tail);
  static CandidatePath from_polyline(Polyline line);

  Pose2D pose_at(double s) const;
  PathProjection project(const Vec2& p) const { return poly_.project(p); }
  double length() const;
  const Polyline& polyline() const { return poly_; }
  bool empty() const { return !has_bezier_ && poly_.empty(); }

 private:
  double bezier_arc(double u) const;   // arc length from u=0
  double bezier_speed(double u) const; // |dP/du|
  double u_of_s(double s) const;

  bool has_bezier_{false};
  std::array<Vec2, 5> ctrl_{};
  double bezier_len_{0.0};
  std::vector<double> arc_table_;  // cumulative arc at u = i / (size-1)
  Polyline tail_;                  // starts at the Bezier endpoint
  Polyline poly_;
};

struct TrajectoryCandidate {
  int index{-1};  // path_index * profiles + profile_index
  double terminal_offset{0.0};
  double accel{0.0};  // commanded constant acceleration of the profile
  CandidatePath path;
  std::vector<TrajectorySample> samples;
  CostTerms costs;
  double total_cost{0.0};
  bool feasible{true};
  bool emergency{false};
};

// Constant-acceleration speed profile clamped into [0, limit].
struct SpeedProfile {
  double v0{0.0};
  double accel{0.0};
  double limit{1e9};

  double speed_at(double t) const;
  double arc_at(double t) const;
  double accel_at(double t) const;  // derivative of the clamped profile
};

struct PlannerConfig {
  double horizon{6.0};
  double dt{0.2};
  std::vector<double> lateral_offsets;  // exactly 11
  std::vector<double> accel_set;        // exactly 12
  bool reject_collisions{true};
  double max_curvature{0.25};
  double blend_time{2.5};   // s of travel blended back to the reference
  double min_blend{12.0};   // m
  double max_blend{40.0};   // m
  double ego_length{4.9};
  double ego_width{1.85};

  PlannerConfig();
  void validate() const;  // throws unless 11 offsets and 12 accelerations
};

struct PlanInput {
  EgoState ego;
  Polyline reference;  // translated reference path from the behavior layer
  std::vector<Prediction> predictions;
  double speed_limit{13.89};
  std::optional<double> stop_distance;  // m of reference arc ahead of ego
};

// 11 quartic Bezier paths leaving the ego pose with its current heading and
// rejoining the reference at each terminal lateral offset, extended along the
// offset reference far enough for any profile.
std::vector<CandidatePath> sample_paths(const EgoState& ego, const Polyline& reference,
                                        const PlannerConfig& cfg);

std::vector<SpeedProfile> sample_speed_profiles(double ego_speed, double speed_limit,
                                                const PlannerConfig& cfg);

// Cartesian product of paths and profiles: exactly 132 candidates. Samples
// place the ego at path arc length arc_at(t); the optional stop distance
// clamps arc and speed to zero at and after the stop point.
std::vector<TrajectoryCandidate> generate_candidates(const std::vector<CandidatePath>& paths,
                                                     const std::vector<SpeedProfile>& profiles,
                                                     const PlannerConfig& cfg,
                                                     std::optional<double> stop_distance = {});

struct FeatureResult {
  CostTerms terms;
  bool overlap{false};  // some sample strictly overlaps a predicted footprint
};

// The five cost integrals of a sampled trajectory. Shared verbatim between
// planning and imitation-learning feature extraction.
FeatureResult compute_features(const std::vector<TrajectorySample>& samples,
                               const Polyline& reference,
                               const std::vector<Prediction>& predictions, double gamma);

// Fills costs, total_cost, and the feasibility flag.
void evaluate_costs(TrajectoryCandidate& candidate, const Polyline& reference,
                    const std::vector<Prediction>& predictions, const CostWeights& weights,
                    const PlannerConfig& cfg);

// Exhaustive argmin over the candidate set; ties break to the lower index.
// When nothing is feasible, returns a maximal-deceleration straight-path
// candidate flagged as emergency.
TrajectoryCandidate plan(const PlanInput& input, const CostWeights& weights,
                         const PlannerConfig& cfg, std::vector<TrajectoryCandidate>* all = nullptr);

}  // namespace drivesim
