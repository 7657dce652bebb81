#include "drivesim/irl.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "drivesim/predictor.hpp"
#include "json.hpp"

namespace drivesim {

namespace {

constexpr double kDemoFps = 25.0;

struct DemoRowTable {
  // per track, sorted by frame
  std::map<int, std::vector<DemoTrackRow>> tracks;
};

DemoRowTable parse_demo_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open demo file: " + path);
  }
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error(path + ": empty demo file");
  }
  const std::array<const char*, 9> expected = {"trackId", "frame", "x",      "y",       "heading",
                                               "speed",   "length", "width", "category"};
  {
    std::stringstream hs(header);
    std::string col;
    std::size_t i = 0;
    while (std::getline(hs, col, ',')) {
      if (i >= expected.size() || col != expected[i]) {
        throw std::runtime_error(path + ": missing or misplaced column " +
                                 (i < expected.size() ? expected[i] : col));
      }
      ++i;
    }
    if (i != expected.size()) {
      throw std::runtime_error(path + ": missing column " + expected[i]);
    }
  }

  DemoRowTable table;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    DemoTrackRow row;
    char cat[64] = {0};
    const int n = std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf,%lf,%lf,%lf,%63s", &row.track_id,
                              &row.frame, &row.x, &row.y, &row.heading, &row.speed, &row.length,
                              &row.width, cat);
    if (n != 9) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad row");
    }
    const auto category = category_from_string(cat);
    if (!category) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unknown category " + cat);
    }
    row.category = *category;
    table.tracks[row.track_id].push_back(row);
  }
  for (auto& [id, rows] : table.tracks) {
    std::sort(rows.begin(), rows.end(),
              [](const DemoTrackRow& a, const DemoTrackRow& b) { return a.frame < b.frame; });
  }
  return table;
}

DemoTrackRow interpolate_row(const std::vector<DemoTrackRow>& rows, double t) {
  const double frame = t * kDemoFps;
  if (frame <= rows.front().frame) {
    return rows.front();
  }
  if (frame >= rows.back().frame) {
    return rows.back();
  }
  const auto it = std::upper_bound(rows.begin(), rows.end(), frame,
                                   [](double f, const DemoTrackRow& r) { return f < r.frame; });
  const DemoTrackRow& hi = *it;
  const DemoTrackRow& lo = *(it - 1);
  const double u = (frame - lo.frame) / (hi.frame - lo.frame);
  DemoTrackRow out = lo;
  out.x = lo.x + u * (hi.x - lo.x);
  out.y = lo.y + u * (hi.y - lo.y);
  out.heading = wrap_angle(lo.heading + u * wrap_angle(hi.heading - lo.heading));
  out.speed = lo.speed + u * (hi.speed - lo.speed);
  return out;
}

std::vector<TrajectorySample> resample_expert(const std::vector<DemoTrackRow>& rows, double t0,
                                              const PlannerConfig& cfg) {
  const int n = static_cast<int>(std::lround(cfg.horizon / cfg.dt));
  std::vector<TrajectorySample> out;
  out.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    const DemoTrackRow r = interpolate_row(rows, t0 + k * cfg.dt);
    TrajectorySample s;
    s.t = k * cfg.dt;
    s.pose = {r.x, r.y, r.heading};
    s.speed = r.speed;
    s.box = {s.pose, cfg.ego_length, cfg.ego_width};
    out.push_back(s);
  }
  for (std::size_t k = 0; k + 1 < out.size(); ++k) {
    out[k].accel = (out[k + 1].speed - out[k].speed) / cfg.dt;
  }
  if (out.size() >= 2) {
    out.back().accel = out[out.size() - 2].accel;
  }
  return out;
}

Prediction prediction_from_rows(const std::vector<DemoTrackRow>& rows, double t0, int track_id,
                                const PlannerConfig& cfg) {
  Prediction p;
  p.track_id = track_id;
  p.category = rows.front().category;
  p.length = rows.front().length;
  p.width = rows.front().width;
  const int n = static_cast<int>(std::lround(cfg.horizon / cfg.dt));
  std::vector<Pose2D> geometry;
  for (int k = 0; k <= n; ++k) {
    const DemoTrackRow r = interpolate_row(rows, t0 + k * cfg.dt);
    PredictionSample s;
    s.t = k * cfg.dt;
    s.pose = {r.x, r.y, r.heading};
    s.box = {s.pose, p.length, p.width};
    p.samples.push_back(s);
    geometry.push_back(s.pose);
  }
  p.base_speed = interpolate_row(rows, t0).speed;
  p.geometry = Polyline(std::move(geometry));
  return p;
}

std::vector<TrajectoryCandidate> demo_candidates(const ExpertDemo& demo, const PlannerConfig& cfg) {
  const auto paths = sample_paths(demo.ego, demo.reference, cfg);
  const auto profiles = sample_speed_profiles(demo.ego.speed, demo.speed_limit, cfg);
  return generate_candidates(paths, profiles, cfg);
}

}  // namespace

CostTerms features(const std::vector<TrajectorySample>& trajectory, const ExpertDemo& demo,
                   double gamma) {
  return compute_features(trajectory, demo.reference, demo.predictions, gamma).terms;
}

double trajectory_loss(const std::vector<TrajectorySample>& a,
                       const std::vector<TrajectorySample>& b, double scale) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n == 0) {
    return 0.0;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    total += std::hypot(a[k].pose.x - b[k].pose.x, a[k].pose.y - b[k].pose.y);
  }
  return scale * total / static_cast<double>(n);
}

IngestResult ingest_demos(const std::vector<std::string>& csv_paths, const LaneMap& map,
                          const TrainConfig& cfg) {
  IngestResult out;
  PredictorConfig anchor_cfg;
  anchor_cfg.horizon = cfg.planner.horizon;
  anchor_cfg.dt = cfg.planner.dt;

  for (const std::string& path : csv_paths) {
    const DemoRowTable table = parse_demo_csv(path);
    for (const auto& [track_id, rows] : table.tracks) {
      if (rows.front().category != ObjectCategory::Car &&
          rows.front().category != ObjectCategory::Truck) {
        continue;
      }
      const double t_begin = rows.front().frame / kDemoFps;
      const double t_end = rows.back().frame / kDemoFps;
      if (t_end - t_begin < cfg.planner.horizon - 1e-9) {
        ++out.skipped_short;
        continue;
      }
      // Consecutive non-overlapping horizon windows.
      for (double t0 = t_begin; t0 + cfg.planner.horizon <= t_end + 1e-9;
           t0 += cfg.planner.horizon) {
        const DemoTrackRow at_start = interpolate_row(rows, t0);

        Track pseudo;
        pseudo.category = at_start.category;
        pseudo.filter.mean << at_start.x, at_start.y, at_start.heading,
            std::max(0.0, at_start.speed), 0.0;
        const auto lane = anchor_to_lane(pseudo, map, anchor_cfg);
        if (!lane) {
          continue;  // crossing or off-map segment: not a surrogate ego
        }

        ExpertDemo demo;
        demo.expert = resample_expert(rows, t0, cfg.planner);
        demo.ego.pose = demo.expert.front().pose;
        demo.ego.speed = std::max(0.0, demo.expert.front().speed);
        demo.ego.box = {demo.ego.pose, at_start.length, at_start.width};

        const Lane& l = map.at(*lane);
        const PathProjection pr = l.centerline.project(demo.ego.pose.position());
        const double needed = demo.ego.speed * cfg.planner.horizon +
                              0.5 * 3.0 * cfg.planner.horizon * cfg.planner.horizon + 20.0;
        demo.reference = lane_geometry(map, *lane, pr.s, needed);
        demo.speed_limit = l.speed_limit;

        for (const auto& [other_id, other_rows] : table.tracks) {
          if (other_id == track_id) {
            continue;
          }
          const double o_begin = other_rows.front().frame / kDemoFps;
          const double o_end = other_rows.back().frame / kDemoFps;
          if (o_end < t0 || o_begin > t0 + cfg.planner.horizon) {
            continue;
          }
          demo.predictions.push_back(prediction_from_rows(other_rows, t0, other_id, cfg.planner));
        }
        out.demos.push_back(std::move(demo));
      }
    }
  }
  return out;
}

namespace {

struct PreparedDemo {
  std::vector<std::array<double, 5>> feats;  // per candidate
  std::vector<double> losses;                // per candidate, loss-scaled
  std::vector<char> feasible;                // planner feasibility per candidate
  std::array<double, 5> expert_feats{};
};

std::array<double, 5> to_array(const CostTerms& t) {
  return {t.swift, t.ljerk, t.latjerk, t.ref, t.safety};
}

double dot(const std::array<double, 5>& a, const std::array<double, 5>& b) {
  double s = 0.0;
  for (int i = 0; i < 5; ++i) {
    s += a[i] * b[i];
  }
  return s;
}

PreparedDemo prepare(const ExpertDemo& demo, const std::vector<TrajectoryCandidate>& candidates,
                     double gamma, double loss_scale, const PlannerConfig& planner) {
  PreparedDemo p;
  p.feats.reserve(candidates.size());
  p.losses.reserve(candidates.size());
  p.feasible.reserve(candidates.size());
  CostWeights unit;
  unit.swift = unit.ljerk = unit.latjerk = unit.ref = unit.safety = 1.0;
  unit.gamma = gamma;
  for (const TrajectoryCandidate& c : candidates) {
    p.feats.push_back(to_array(features(c.samples, demo, gamma)));
    p.losses.push_back(trajectory_loss(c.samples, demo.expert, loss_scale));
    TrajectoryCandidate copy = c;
    evaluate_costs(copy, demo.reference, demo.predictions, unit, planner);
    p.feasible.push_back(copy.feasible ? 1 : 0);
  }
  p.expert_feats = to_array(features(demo.expert, demo, gamma));
  return p;
}

// Margin constraints range over the planner's feasible set only.
int plan_index(const PreparedDemo& p, const std::array<double, 5>& w) {
  int best = -1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.feats.size(); ++i) {
    if (!p.feasible[i]) {
      continue;
    }
    const double c = dot(w, p.feats[i]);
    if (c < best_cost) {
      best_cost = c;
      best = static_cast<int>(i);
    }
  }
  return best < 0 ? 0 : best;
}

int loss_nearest_index(const PreparedDemo& p) {
  int best = -1;
  double best_loss = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.losses.size(); ++i) {
    if (!p.feasible[i]) {
      continue;
    }
    if (p.losses[i] < best_loss) {
      best_loss = p.losses[i];
      best = static_cast<int>(i);
    }
  }
  return best < 0 ? 0 : best;
}

}  // namespace

TrainedWeights mmp_train(const std::vector<ExpertDemo>& demos, const TrainConfig& cfg) {
  if (demos.empty()) {
    throw std::invalid_argument("mmp_train: need at least one demo");
  }
  if (cfg.gamma_grid.empty()) {
    throw std::invalid_argument("mmp_train: empty gamma grid");
  }

  // Candidates are gamma-independent; build them once per demo.
  std::vector<std::vector<TrajectoryCandidate>> candidates;
  candidates.reserve(demos.size());
  for (const ExpertDemo& demo : demos) {
    candidates.push_back(demo_candidates(demo, cfg.planner));
  }

  std::vector<std::size_t> train_idx, holdout_idx;
  for (std::size_t i = 0; i < demos.size(); ++i) {
    if (cfg.holdout_every > 0 && demos.size() > 1 &&
        i % static_cast<std::size_t>(cfg.holdout_every) == static_cast<std::size_t>(cfg.holdout_every) - 1) {
      holdout_idx.push_back(i);
    } else {
      train_idx.push_back(i);
    }
  }
  if (holdout_idx.empty()) {
    holdout_idx = train_idx;  // tiny suites validate in-sample
  }

  TrainedWeights best;
  bool have_best = false;

  for (double gamma : cfg.gamma_grid) {
    std::vector<PreparedDemo> prepared;
    prepared.reserve(demos.size());
    for (std::size_t i = 0; i < demos.size(); ++i) {
      prepared.push_back(prepare(demos[i], candidates[i], gamma, cfg.loss_scale, cfg.planner));
    }

    std::array<double, 5> w{0.5, 0.5, 0.5, 0.5, 0.5};
    // Tail average of the iterates: the returned point of the subgradient run.
    std::array<double, 5> w_avg{};
    int avg_count = 0;
    const int avg_from = std::max(1, cfg.epochs / 2);
    std::vector<double> history;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
      const double eta = cfg.eta0 / std::pow(static_cast<double>(epoch), cfg.eta_exponent);
      for (std::size_t i : train_idx) {
        const PreparedDemo& p = prepared[i];
        // Loss-augmented inner problem over the feasible set.
        int star = 0;
        double star_val = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < p.feats.size(); ++c) {
          if (!p.feasible[c]) {
            continue;
          }
          const double v = dot(w, p.feats[c]) - p.losses[c];
          if (v < star_val) {
            star_val = v;
            star = static_cast<int>(c);
          }
        }
        for (int k = 0; k < 5; ++k) {
          const double g = cfg.lambda * w[k] + p.expert_feats[k] - p.feats[static_cast<std::size_t>(star)][k];
          w[k] = std::max(0.0, w[k] - eta * g);
        }
      }
      if (epoch >= avg_from) {
        for (int k = 0; k < 5; ++k) {
          w_avg[k] += w[k];
        }
        ++avg_count;
      }
      // Exact objective for convergence monitoring.
      double obj = 0.0;
      for (std::size_t i : train_idx) {
        const PreparedDemo& p = prepared[i];
        double inner = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < p.feats.size(); ++c) {
          if (!p.feasible[c]) {
            continue;
          }
          inner = std::min(inner, dot(w, p.feats[c]) - p.losses[c]);
        }
        obj += dot(w, p.expert_feats) - inner;
      }
      obj = obj / static_cast<double>(train_idx.size());
      double norm2 = 0.0;
      for (double v : w) {
        norm2 += v * v;
      }
      obj += 0.5 * cfg.lambda * norm2;
      history.push_back(obj);
    }
    if (avg_count > 0) {
      for (int k = 0; k < 5; ++k) {
        w[k] = w_avg[k] / avg_count;
      }
    }

    if (*std::max_element(w.begin(), w.end()) <= 0.0) {
      throw std::runtime_error("mmp_train: weights collapsed to zero; reduce lambda");
    }

    double holdout_loss = 0.0;
    double matches = 0.0;
    for (std::size_t i : holdout_idx) {
      const PreparedDemo& p = prepared[i];
      const int chosen = plan_index(p, w);
      holdout_loss += p.losses[static_cast<std::size_t>(chosen)];
      if (chosen == loss_nearest_index(p)) {
        matches += 1.0;
      }
    }
    holdout_loss /= static_cast<double>(holdout_idx.size());

    TrainedWeights tw;
    tw.weights.swift = w[0];
    tw.weights.ljerk = w[1];
    tw.weights.latjerk = w[2];
    tw.weights.ref = w[3];
    tw.weights.safety = w[4];
    tw.weights.gamma = gamma;
    tw.holdout_loss = holdout_loss;
    tw.holdout_match_rate = matches / static_cast<double>(holdout_idx.size());
    tw.objective_history = history;
    best.gamma_losses.emplace_back(gamma, holdout_loss);
    if (!have_best || holdout_loss < best.holdout_loss - 1e-12) {
      const auto gamma_losses = best.gamma_losses;
      best = tw;
      best.gamma_losses = gamma_losses;
      have_best = true;
    }
  }

  // Normalize so the largest component is 1.
  double peak = std::max({best.weights.swift, best.weights.ljerk, best.weights.latjerk,
                          best.weights.ref, best.weights.safety});
  best.weights.swift /= peak;
  best.weights.ljerk /= peak;
  best.weights.latjerk /= peak;
  best.weights.ref /= peak;
  best.weights.safety /= peak;
  return best;
}

ImitationEval evaluate_imitation(const CostWeights& weights, const std::vector<ExpertDemo>& demos,
                                 const TrainConfig& cfg) {
  if (demos.empty()) {
    throw std::invalid_argument("evaluate_imitation: no demos");
  }
  const std::array<double, 5> w{weights.swift, weights.ljerk, weights.latjerk, weights.ref,
                                weights.safety};
  ImitationEval ev;
  for (const ExpertDemo& demo : demos) {
    const auto candidates = demo_candidates(demo, cfg.planner);
    const PreparedDemo p = prepare(demo, candidates, weights.gamma, cfg.loss_scale, cfg.planner);
    const int chosen = plan_index(p, w);
    ev.mean_loss += p.losses[static_cast<std::size_t>(chosen)];
    if (chosen == loss_nearest_index(p)) {
      ev.match_rate += 1.0;
    }
  }
  ev.mean_loss /= static_cast<double>(demos.size());
  ev.match_rate /= static_cast<double>(demos.size());
  return ev;
}

std::string weights_to_json(const TrainedWeights& tw) {
  nlohmann::json j;
  j["weights"] = {{"swift", tw.weights.swift},
                  {"ljerk", tw.weights.ljerk},
                  {"latjerk", tw.weights.latjerk},
                  {"ref", tw.weights.ref},
                  {"safety", tw.weights.safety}};
  j["gamma"] = tw.weights.gamma;
  j["holdout_loss"] = tw.holdout_loss;
  j["holdout_match_rate"] = tw.holdout_match_rate;
  nlohmann::json gl = nlohmann::json::array();
  for (const auto& [gamma, loss] : tw.gamma_losses) {
    gl.push_back({{"gamma", gamma}, {"loss", loss}});
  }
  j["gamma_grid"] = gl;
  return j.dump(2);
}

CostWeights weights_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  CostWeights w;
  const auto& jw = j.at("weights");
  w.swift = jw.at("swift").get<double>();
  w.ljerk = jw.at("ljerk").get<double>();
  w.latjerk = jw.at("latjerk").get<double>();
  w.ref = jw.at("ref").get<double>();
  w.safety = jw.at("safety").get<double>();
  w.gamma = j.at("gamma").get<double>();
  return w;
}

std::string write_demo_csv(const std::vector<DemoTrackRow>& rows) {
  std::ostringstream out;
  out << "trackId,frame,x,y,heading,speed,length,width,category\n";
  char buf[256];
  for (const DemoTrackRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.9f,%.9f,%.9f,%.9f,%.3f,%.3f,%s\n", r.track_id, r.frame,
                  r.x, r.y, r.heading, r.speed, r.length, r.width, to_string(r.category));
    out << buf;
  }
  return out.str();
}

std::vector<ExpertDemo> generate_synthetic_demos(int count, const CostWeights& generating,
                                                 const LaneMap& map, int lane_id,
                                                 const TrainConfig& cfg, std::uint64_t seed,
                                                 double min_margin) {
  std::mt19937 rng(static_cast<unsigned>(seed));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const Lane& lane = map.at(lane_id);

  std::vector<ExpertDemo> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < count && attempts < count * 60) {
    ++attempts;
    ExpertDemo demo;
    const double s0 = 5.0 + 10.0 * u01(rng);
    const double lateral = -1.6 + 3.2 * u01(rng);
    const double yaw_jitter = -0.08 + 0.16 * u01(rng);
    const double v0 = 3.0 + 7.0 * u01(rng);

    const Pose2D on_lane = lane.centerline.pose_at(s0);
    demo.ego.pose = {on_lane.x - lateral * std::sin(on_lane.yaw),
                     on_lane.y + lateral * std::cos(on_lane.yaw),
                     wrap_angle(on_lane.yaw + yaw_jitter)};
    demo.ego.speed = v0;
    demo.ego.box = {demo.ego.pose, cfg.planner.ego_length, cfg.planner.ego_width};

    const double needed =
        v0 * cfg.planner.horizon + 0.5 * 3.0 * cfg.planner.horizon * cfg.planner.horizon + 20.0;
    demo.reference = lane_geometry(map, lane_id, s0, needed);
    demo.speed_limit = 20.0;  // headroom above the sampled speeds: profiles stay distinct

    // A mix of empty and occupied scenes keeps every weight identifiable.
    const double roll = u01(rng);
    const int objects = roll < 0.3 ? 0 : (roll < 0.75 ? 1 : 2);
    for (int i = 0; i < objects; ++i) {
      const double ahead = 10.0 + 35.0 * u01(rng);
      const double obj_lat = -2.2 + 4.4 * u01(rng);
      const bool crossing = u01(rng) < 0.3;
      const Pose2D anchor = lane.centerline.pose_at(s0 + ahead);
      Pose2D obj_pose{anchor.x - obj_lat * std::sin(anchor.yaw),
                      anchor.y + obj_lat * std::cos(anchor.yaw), anchor.yaw};
      double obj_speed;
      if (crossing) {
        obj_pose.yaw = wrap_angle(anchor.yaw + kPi / 2.0);
        obj_speed = 0.8 + 1.0 * u01(rng);
      } else {
        obj_speed = 3.0 * u01(rng);
      }

      Prediction p;
      p.track_id = 100 + i;
      p.category = crossing ? ObjectCategory::Pedestrian : ObjectCategory::Car;
      p.length = crossing ? 0.6 : 4.5;
      p.width = crossing ? 0.6 : 1.9;
      p.base_speed = obj_speed;
      Polyline geom;
      geom.append(obj_pose);
      const double glen = obj_speed * cfg.planner.horizon + 5.0;
      geom.append({obj_pose.x + glen * std::cos(obj_pose.yaw),
                   obj_pose.y + glen * std::sin(obj_pose.yaw), obj_pose.yaw});
      p.geometry = geom;
      const int n = static_cast<int>(std::lround(cfg.planner.horizon / cfg.planner.dt));
      for (int k = 0; k <= n; ++k) {
        const double t = k * cfg.planner.dt;
        PredictionSample ps;
        ps.t = t;
        ps.pose = geom.pose_at(obj_speed * t);
        ps.box = {ps.pose, p.length, p.width};
        p.samples.push_back(ps);
      }
      demo.predictions.push_back(std::move(p));
    }

    PlanInput input;
    input.ego = demo.ego;
    input.reference = demo.reference;
    input.predictions = demo.predictions;
    input.speed_limit = demo.speed_limit;
    std::vector<TrajectoryCandidate> all;
    const TrajectoryCandidate expert = plan(input, generating, cfg.planner, &all);
    if (expert.emergency || !expert.feasible) {
      continue;
    }
    // Optionally keep only decisive contexts: the expert must beat the
    // runner-up by a clear margin to be a stable evaluation label.
    if (min_margin > 0.0) {
      double runner_up = std::numeric_limits<double>::infinity();
      for (const TrajectoryCandidate& c : all) {
        if (c.feasible && c.index != expert.index && c.total_cost > expert.total_cost + 1e-9) {
          runner_up = std::min(runner_up, c.total_cost);
        }
      }
      if (runner_up - expert.total_cost < min_margin) {
        continue;
      }
    }
    demo.expert = expert.samples;
    out.push_back(std::move(demo));
  }
  if (static_cast<int>(out.size()) < count) {
    throw std::runtime_error("generate_synthetic_demos: too many infeasible contexts");
  }
  return out;
}

std::vector<DemoTrackRow> synthetic_demo_rows(const std::vector<ExpertDemo>& demos) {
  std::vector<DemoTrackRow> rows;
  int next_track = 1;
  int frame_base = 0;
  for (const ExpertDemo& demo : demos) {
    const int ego_track = next_track++;
    for (const TrajectorySample& s : demo.expert) {
      DemoTrackRow r;
      r.track_id = ego_track;
      r.frame = frame_base + static_cast<int>(std::lround(s.t * kDemoFps));
      r.x = s.pose.x;
      r.y = s.pose.y;
      r.heading = s.pose.yaw;
      r.speed = s.speed;
      r.length = demo.ego.box.length;
      r.width = demo.ego.box.width;
      r.category = ObjectCategory::Car;
      rows.push_back(r);
    }
    for (const Prediction& p : demo.predictions) {
      const int obj_track = next_track++;
      for (const PredictionSample& s : p.samples) {
        DemoTrackRow r;
        r.track_id = obj_track;
        r.frame = frame_base + static_cast<int>(std::lround(s.t * kDemoFps));
        r.x = s.pose.x;
        r.y = s.pose.y;
        r.heading = s.pose.yaw;
        r.speed = p.base_speed;
        r.length = p.length;
        r.width = p.width;
        r.category = p.category;
        rows.push_back(r);
      }
    }
    // Windows of distinct demos must not overlap in time.
    frame_base += 1000;
  }
  return rows;
}

}  // namespace drivesim
