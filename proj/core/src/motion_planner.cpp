#include "drivesim/motion_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace drivesim {

namespace {

constexpr double kSwiftTarget = 3.0;  // m/s^2 the swiftness cost is anchored to

double trapezoid(const std::vector<double>& y, double dt) {
  if (y.size() < 2) {
    return 0.0;
  }
  double acc = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    acc += y[i];
  }
  return acc * dt;
}

}  // namespace

PlannerConfig::PlannerConfig() {
  lateral_offsets.reserve(11);
  for (int i = 0; i < 11; ++i) {
    lateral_offsets.push_back(-2.5 + 0.5 * i);
  }
  accel_set = {-6.0, -5.0, -4.0, -3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0};
}

void PlannerConfig::validate() const {
  if (lateral_offsets.size() != 11) {
    throw std::invalid_argument("planner config needs exactly 11 lateral offsets");
  }
  if (accel_set.size() != 12) {
    throw std::invalid_argument("planner config needs exactly 12 accelerations");
  }
}

double SpeedProfile::speed_at(double t) const {
  return std::clamp(v0 + accel * t, 0.0, limit);
}

double SpeedProfile::accel_at(double t) const {
  const double v = v0 + accel * t;
  if (v <= 0.0 || v >= limit) {
    return 0.0;
  }
  return accel;
}

double SpeedProfile::arc_at(double t) const {
  if (t <= 0.0) {
    return 0.0;
  }
  // Integrate the clamped linear speed piecewise around its breakpoints.
  const double vstart = std::clamp(v0, 0.0, limit);
  if (accel == 0.0) {
    return vstart * t;
  }
  double t_break = std::numeric_limits<double>::infinity();
  double v_after = vstart;
  if (accel > 0.0 && v0 < limit) {
    t_break = (limit - v0) / accel;
    v_after = limit;
  } else if (accel > 0.0) {
    return limit * t;  // starts at or above the limit
  } else if (accel < 0.0 && v0 > 0.0) {
    const double start_excess = v0 > limit ? (v0 - limit) / -accel : 0.0;
    if (start_excess > 0.0) {
      // rides the limit until the unclamped line drops below it
      if (t <= start_excess) {
        return limit * t;
      }
      SpeedProfile tail{limit, accel, limit};
      return limit * start_excess + tail.arc_at(t - start_excess);
    }
    t_break = v0 / -accel;
    v_after = 0.0;
  } else {
    return 0.0;  // accel < 0 from standstill
  }
  if (t <= t_break) {
    return vstart * t + 0.5 * accel * t * t;
  }
  const double s_break = vstart * t_break + 0.5 * accel * t_break * t_break;
  return s_break + v_after * (t - t_break);
}

std::vector<SpeedProfile> sample_speed_profiles(double ego_speed, double speed_limit,
                                                const PlannerConfig& cfg) {
  cfg.validate();
  std::vector<SpeedProfile> out;
  out.reserve(cfg.accel_set.size());
  for (double a : cfg.accel_set) {
    out.push_back({std::max(0.0, ego_speed), a, std::max(0.0, speed_limit)});
  }
  return out;
}

namespace {

Vec2 bezier4(const std::array<Vec2, 5>& p, double u) {
  const double w = 1.0 - u;
  const double b0 = w * w * w * w;
  const double b1 = 4.0 * w * w * w * u;
  const double b2 = 6.0 * w * w * u * u;
  const double b3 = 4.0 * w * u * u * u;
  const double b4 = u * u * u * u;
  return p[0] * b0 + p[1] * b1 + p[2] * b2 + p[3] * b3 + p[4] * b4;
}

Vec2 bezier4_deriv(const std::array<Vec2, 5>& p, double u) {
  const double w = 1.0 - u;
  Vec2 d{0.0, 0.0};
  d = d + (p[1] - p[0]) * (4.0 * w * w * w);
  d = d + (p[2] - p[1]) * (12.0 * w * w * u);
  d = d + (p[3] - p[2]) * (12.0 * w * u * u);
  d = d + (p[4] - p[3]) * (4.0 * u * u * u);
  return d;
}

// 5-point Gauss-Legendre nodes and weights on [0, 1].
constexpr std::array<double, 5> kGaussX = {0.046910077030668, 0.230765344947158, 0.5,
                                           0.769234655052842, 0.953089922969332};
constexpr std::array<double, 5> kGaussW = {0.118463442528095, 0.239314335249683,
                                           0.284444444444444, 0.239314335249683,
                                           0.118463442528095};

}  // namespace

double CandidatePath::bezier_speed(double u) const { return bezier4_deriv(ctrl_, u).norm(); }

double CandidatePath::bezier_arc(double u) const {
  const std::size_t n = arc_table_.size() - 1;
  const double scaled = std::clamp(u, 0.0, 1.0) * static_cast<double>(n);
  const std::size_t i = std::min(static_cast<std::size_t>(scaled), n - 1);
  const double u0 = static_cast<double>(i) / static_cast<double>(n);
  double partial = 0.0;
  const double du = std::clamp(u, 0.0, 1.0) - u0;
  for (int g = 0; g < 5; ++g) {
    partial += kGaussW[g] * bezier_speed(u0 + du * kGaussX[g]);
  }
  return arc_table_[i] + partial * du;
}

double CandidatePath::u_of_s(double s) const {
  const std::size_t n = arc_table_.size() - 1;
  const auto it = std::upper_bound(arc_table_.begin(), arc_table_.end(), s);
  std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - arc_table_.begin()), n);
  const std::size_t lo = hi == 0 ? 0 : hi - 1;
  const double seg = arc_table_[hi] - arc_table_[lo];
  double u = (static_cast<double>(lo) +
              (seg > 0.0 ? (s - arc_table_[lo]) / seg : 0.0)) /
             static_cast<double>(n);
  for (int iter = 0; iter < 8; ++iter) {
    const double f = bezier_arc(u) - s;
    const double d = std::max(bezier_speed(u), 1e-9);
    const double step = f / d;
    u = std::clamp(u - step, 0.0, 1.0);
    if (std::abs(step) < 1e-11) {
      break;
    }
  }
  return u;
}

CandidatePath CandidatePath::blend_then_tail(const std::array<Vec2, 5>& ctrl, Polyline tail) {
  CandidatePath path;
  path.has_bezier_ = true;
  path.ctrl_ = ctrl;
  constexpr int kTable = 64;
  path.arc_table_.resize(kTable + 1);
  path.arc_table_[0] = 0.0;
  for (int i = 0; i < kTable; ++i) {
    const double a = static_cast<double>(i) / kTable;
    const double du = 1.0 / kTable;
    double piece = 0.0;
    for (int g = 0; g < 5; ++g) {
      piece += kGaussW[g] * path.bezier_speed(a + du * kGaussX[g]);
    }
    path.arc_table_[static_cast<std::size_t>(i) + 1] =
        path.arc_table_[static_cast<std::size_t>(i)] + piece * du;
  }
  path.bezier_len_ = path.arc_table_.back();
  path.tail_ = std::move(tail);

  // Coarse polyline for projection and curvature queries.
  constexpr int kPoly = 96;
  for (int i = 0; i <= kPoly; ++i) {
    const double u = static_cast<double>(i) / kPoly;
    const Vec2 pos = bezier4(ctrl, u);
    const Vec2 d = bezier4_deriv(ctrl, u);
    const double yaw = d.norm() > 1e-12 ? std::atan2(d.y, d.x) : 0.0;
    path.poly_.append({pos.x, pos.y, yaw});
  }
  for (const Pose2D& p : path.tail_.points()) {
    path.poly_.append(p);
  }
  return path;
}

CandidatePath CandidatePath::from_polyline(Polyline line) {
  CandidatePath path;
  path.tail_ = line;
  path.poly_ = std::move(line);
  return path;
}

double CandidatePath::length() const {
  return has_bezier_ ? bezier_len_ + tail_.length() : tail_.length();
}

Pose2D CandidatePath::pose_at(double s) const {
  if (has_bezier_ && s <= bezier_len_) {
    const double u = u_of_s(std::max(0.0, s));
    const Vec2 pos = bezier4(ctrl_, u);
    const Vec2 d = bezier4_deriv(ctrl_, u);
    const double yaw = d.norm() > 1e-12 ? std::atan2(d.y, d.x) : 0.0;
    return {pos.x, pos.y, yaw};
  }
  const double tail_s = has_bezier_ ? s - bezier_len_ : s;
  return tail_.pose_at(tail_s);
}

std::vector<CandidatePath> sample_paths(const EgoState& ego, const Polyline& reference,
                                        const PlannerConfig& cfg) {
  cfg.validate();
  if (reference.size() < 2) {
    throw std::invalid_argument("sample_paths: degenerate reference (< 2 points)");
  }
  const PathProjection start = reference.project(ego.pose.position());
  // Misalignment against the rejoin tangent stretches the blend so the path
  // stays within the curvature budget even from a badly oriented pose.
  const double base_blend = std::clamp(ego.speed * cfg.blend_time, cfg.min_blend, cfg.max_blend);
  const double misalign =
      std::abs(wrap_angle(ego.pose.yaw - reference.yaw_at(start.s + base_blend)));
  const double blend = base_blend + 30.0 * misalign;
  const double needed = std::max(0.0, ego.speed) * cfg.horizon +
                        0.5 * kSwiftTarget * cfg.horizon * cfg.horizon + 10.0;

  std::vector<CandidatePath> paths;
  paths.reserve(cfg.lateral_offsets.size());
  for (double offset : cfg.lateral_offsets) {
    const double s1 = start.s + blend;
    const Pose2D join = reference.pose_at(s1);
    const Vec2 join_tan = join.heading();
    const Vec2 target{join.x - offset * std::sin(join.yaw), join.y + offset * std::cos(join.yaw)};

    const Vec2 p0 = ego.pose.position();
    const double handle = std::max(1.0, (target - p0).norm() / 3.0);
    std::array<Vec2, 5> ctrl;
    ctrl[0] = p0;
    ctrl[1] = p0 + ego.pose.heading() * handle;
    ctrl[4] = target;
    ctrl[3] = target - join_tan * handle;
    // Collinear last three controls: zero curvature at the join, so the path
    // continues onto the offset reference without a curvature step.
    ctrl[2] = target - join_tan * (2.0 * handle);

    // Offset reference past the blend until any profile fits.
    Polyline tail;
    tail.append({target.x, target.y, join.yaw});
    double s = s1;
    while (tail.length() + blend < needed) {
      s += 1.0;
      const Pose2D rp = reference.pose_at(s);
      tail.append({rp.x - offset * std::sin(rp.yaw), rp.y + offset * std::cos(rp.yaw), rp.yaw});
    }
    paths.push_back(CandidatePath::blend_then_tail(ctrl, std::move(tail)));
  }
  return paths;
}

std::vector<TrajectoryCandidate> generate_candidates(const std::vector<CandidatePath>& paths,
                                                     const std::vector<SpeedProfile>& profiles,
                                                     const PlannerConfig& cfg,
                                                     std::optional<double> stop_distance) {
  cfg.validate();
  if (paths.size() != cfg.lateral_offsets.size() || profiles.size() != cfg.accel_set.size()) {
    throw std::invalid_argument("generate_candidates: wrong path or profile count");
  }
  const int n = static_cast<int>(std::lround(cfg.horizon / cfg.dt));
  std::vector<TrajectoryCandidate> out;
  out.reserve(paths.size() * profiles.size());
  for (std::size_t pi = 0; pi < paths.size(); ++pi) {
    for (std::size_t qi = 0; qi < profiles.size(); ++qi) {
      TrajectoryCandidate c;
      c.index = static_cast<int>(pi * profiles.size() + qi);
      c.terminal_offset = cfg.lateral_offsets[pi];
      c.accel = profiles[qi].accel;
      c.path = paths[pi];
      c.samples.reserve(n + 1);
      for (int k = 0; k <= n; ++k) {
        const double t = k * cfg.dt;
        double s = profiles[qi].arc_at(t);
        double v = profiles[qi].speed_at(t);
        if (stop_distance && s >= *stop_distance) {
          s = std::max(0.0, *stop_distance);
          v = 0.0;
        }
        TrajectorySample sample;
        sample.t = t;
        sample.pose = c.path.pose_at(s);
        sample.speed = v;
        sample.box = {sample.pose, cfg.ego_length, cfg.ego_width};
        c.samples.push_back(sample);
      }
      // Effective accel: forward difference of the sampled speeds, so clamps
      // and stop points show up in the swiftness and jerk integrals.
      for (std::size_t k = 0; k + 1 < c.samples.size(); ++k) {
        c.samples[k].accel = (c.samples[k + 1].speed - c.samples[k].speed) / cfg.dt;
      }
      if (c.samples.size() >= 2) {
        c.samples.back().accel = c.samples[c.samples.size() - 2].accel;
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

FeatureResult compute_features(const std::vector<TrajectorySample>& samples,
                               const Polyline& reference,
                               const std::vector<Prediction>& predictions, double gamma) {
  FeatureResult res;
  const std::size_t n = samples.size();
  if (n < 2) {
    return res;
  }
  const double dt = samples[1].t - samples[0].t;

  std::vector<double> swift_sq(n), lat(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double da = samples[k].accel - kSwiftTarget;
    swift_sq[k] = da * da;
    lat[k] = reference.project(samples[k].pose.position()).lateral;
  }
  res.terms.swift = trapezoid(swift_sq, dt);

  std::vector<double> ref_sq(n);
  for (std::size_t k = 0; k < n; ++k) {
    ref_sq[k] = lat[k] * lat[k];
  }
  res.terms.ref = trapezoid(ref_sq, dt);

  // First derivative: central interior, second-order one-sided at the ends.
  const auto derivative = [dt](const std::vector<double>& y) {
    const std::size_t m = y.size();
    std::vector<double> d(m, 0.0);
    if (m < 3) {
      return d;
    }
    d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dt);
    for (std::size_t k = 1; k + 1 < m; ++k) {
      d[k] = (y[k + 1] - y[k - 1]) / (2.0 * dt);
    }
    d[m - 1] = (3.0 * y[m - 1] - 4.0 * y[m - 2] + y[m - 3]) / (2.0 * dt);
    return d;
  };

  // Longitudinal jerk from the effective accel samples.
  std::vector<double> accel(n);
  for (std::size_t k = 0; k < n; ++k) {
    accel[k] = samples[k].accel;
  }
  std::vector<double> ljerk_sq(n, 0.0);
  {
    const std::vector<double> j = derivative(accel);
    for (std::size_t k = 0; k < n; ++k) {
      ljerk_sq[k] = j[k] * j[k];
    }
  }
  res.terms.ljerk = trapezoid(ljerk_sq, dt);

  // Lateral jerk: third derivative of the lateral offset, built from the
  // 3-point second difference followed by the first-derivative stencil.
  std::vector<double> lat_acc(n, 0.0);
  if (n >= 4) {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      lat_acc[k] = (lat[k + 1] - 2.0 * lat[k] + lat[k - 1]) / (dt * dt);
    }
    lat_acc[0] = (2.0 * lat[0] - 5.0 * lat[1] + 4.0 * lat[2] - lat[3]) / (dt * dt);
    lat_acc[n - 1] =
        (2.0 * lat[n - 1] - 5.0 * lat[n - 2] + 4.0 * lat[n - 3] - lat[n - 4]) / (dt * dt);
  }
  std::vector<double> latjerk_sq(n, 0.0);
  {
    const std::vector<double> j = derivative(lat_acc);
    for (std::size_t k = 0; k < n; ++k) {
      latjerk_sq[k] = j[k] * j[k];
    }
  }
  res.terms.latjerk = trapezoid(latjerk_sq, dt);

  // Safety: per object, the worst exp(-gamma * min polygon distance) over the
  // horizon; contributions sum across objects. A center-distance lower bound
  // skips samples that provably cannot tighten the per-object minimum.
  for (const Prediction& pred : predictions) {
    if (pred.samples.empty()) {
      continue;
    }
    const double reach = 0.5 * std::hypot(pred.length, pred.width) +
                         0.5 * std::hypot(samples[0].box.length, samples[0].box.width) + 0.2;
    double min_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      // Predictions share the planner grid; guard with nearest-index lookup.
      const double t = samples[k].t;
      const double pred_dt = pred.samples.size() > 1 ? pred.samples[1].t - pred.samples[0].t : 1.0;
      std::size_t pk = static_cast<std::size_t>(std::lround(t / pred_dt));
      pk = std::min(pk, pred.samples.size() - 1);
      const OrientedBox& other = pred.samples[pk].box;
      const double center_gap = std::hypot(samples[k].pose.x - other.center.x,
                                           samples[k].pose.y - other.center.y);
      if (center_gap - reach >= min_dist) {
        continue;
      }
      if (boxes_overlap(samples[k].box, other)) {
        res.overlap = true;
      }
      min_dist = std::min(min_dist, min_polygon_distance(samples[k].box, other));
    }
    res.terms.safety += std::exp(-gamma * std::min(min_dist, 1e9));
  }
  return res;
}

namespace {

bool curvature_ok(const TrajectoryCandidate& c, const PlannerConfig& cfg) {
  // Check heading change per arc length over the traversed portion only.
  const double s_max = c.samples.empty() ? 0.0 : [&] {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < c.samples.size(); ++k) {
      const auto& a = c.samples[k].pose;
      const auto& b = c.samples[k + 1].pose;
      total += std::hypot(b.x - a.x, b.y - a.y);
    }
    return total;
  }();
  if (s_max < 1e-6) {
    return true;
  }
  const auto& pts = c.path.polyline().points();
  const auto& arc = c.path.polyline().arc();
  for (std::size_t i = 0; i + 1 < pts.size() && arc[i] <= s_max; ++i) {
    const double ds = arc[i + 1] - arc[i];
    if (ds < 1e-9) {
      continue;
    }
    const double dyaw = std::abs(wrap_angle(pts[i + 1].yaw - pts[i].yaw));
    if (dyaw / ds > cfg.max_curvature) {
      return false;
    }
  }
  return true;
}

}  // namespace

void evaluate_costs(TrajectoryCandidate& candidate, const Polyline& reference,
                    const std::vector<Prediction>& predictions, const CostWeights& weights,
                    const PlannerConfig& cfg) {
  const FeatureResult fr = compute_features(candidate.samples, reference, predictions, weights.gamma);
  candidate.costs = fr.terms;
  candidate.feasible = curvature_ok(candidate, cfg) && !(cfg.reject_collisions && fr.overlap);
  candidate.total_cost =
      candidate.feasible ? fr.terms.weighted(weights) : std::numeric_limits<double>::infinity();
}

TrajectoryCandidate plan(const PlanInput& input, const CostWeights& weights,
                         const PlannerConfig& cfg, std::vector<TrajectoryCandidate>* all) {
  cfg.validate();
  const std::vector<CandidatePath> paths = sample_paths(input.ego, input.reference, cfg);
  const std::vector<SpeedProfile> profiles =
      sample_speed_profiles(input.ego.speed, input.speed_limit, cfg);
  std::vector<TrajectoryCandidate> candidates =
      generate_candidates(paths, profiles, cfg, input.stop_distance);

  // Projection cost scales with reference size: evaluate against the local
  // window every candidate can reach.
  const double ego_s = input.reference.project(input.ego.pose.position()).s;
  const double max_arc = std::max(0.0, input.ego.speed) * cfg.horizon +
                         0.5 * kSwiftTarget * cfg.horizon * cfg.horizon;
  Polyline window = input.reference.slice(ego_s - 15.0, ego_s + max_arc + 20.0);
  const Polyline& ref = window.size() >= 2 ? window : input.reference;

  const int best_unset = -1;
  int best = best_unset;
  for (TrajectoryCandidate& c : candidates) {
    evaluate_costs(c, ref, input.predictions, weights, cfg);
    if (c.feasible &&
        (best == best_unset || c.total_cost < candidates[static_cast<std::size_t>(best)].total_cost)) {
      best = c.index;
    }
  }
  if (all != nullptr) {
    *all = candidates;
  }
  if (best != best_unset) {
    return candidates[static_cast<std::size_t>(best)];
  }

  // No feasible candidate: brake as hard as the profile set allows, straight
  // along the current heading.
  const double max_decel = *std::min_element(cfg.accel_set.begin(), cfg.accel_set.end());
  Polyline straight;
  straight.append(input.ego.pose);
  const double len = std::max(1.0, input.ego.speed * cfg.horizon);
  straight.append({input.ego.pose.x + len * std::cos(input.ego.pose.yaw),
                   input.ego.pose.y + len * std::sin(input.ego.pose.yaw), input.ego.pose.yaw});
  const SpeedProfile hard{std::max(0.0, input.ego.speed), max_decel, std::max(0.0, input.speed_limit)};
  TrajectoryCandidate c;
  c.index = -1;
  c.accel = max_decel;
  c.path = CandidatePath::from_polyline(straight);
  c.emergency = true;
  const int n = static_cast<int>(std::lround(cfg.horizon / cfg.dt));
  for (int k = 0; k <= n; ++k) {
    const double t = k * cfg.dt;
    TrajectorySample s;
    s.t = t;
    s.pose = straight.pose_at(hard.arc_at(t));
    s.speed = hard.speed_at(t);
    s.accel = hard.accel_at(t);
    s.box = {s.pose, cfg.ego_length, cfg.ego_width};
    c.samples.push_back(s);
  }
  c.feasible = false;
  c.total_cost = std::numeric_limits<double>::infinity();
  return c;
}

}  // namespace drivesim
