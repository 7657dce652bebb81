#include "drivesim/scoring.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace drivesim {

double PenaltyTable::at(InfractionKind k) const {
  const auto it = coeff.find(k);
  if (it == coeff.end()) {
    throw std::runtime_error(std::string("no penalty coefficient for infraction kind ") + to_string(k));
  }
  return it->second;
}

double route_completion(const RoutePlan& route, const std::vector<Pose2D>& trace) {
  if (trace.empty()) {
    throw std::invalid_argument("route_completion: empty trace");
  }
  if (route.total_length <= 0.0) {
    return 100.0;
  }
  double max_s = 0.0;
  bool reached_end = false;
  const Pose2D goal = route.reference_path.pose_at(route.total_length);
  for (const Pose2D& p : trace) {
    const PathProjection pr = route.reference_path.project(p.position());
    max_s = std::max(max_s, pr.s);
    if (std::hypot(p.x - goal.x, p.y - goal.y) <= 5.0) {
      reached_end = true;
    }
  }
  if (reached_end) {
    return 100.0;
  }
  return std::min(100.0, 100.0 * max_s / route.total_length);
}

ScoreReport compute_score(double rc, const std::vector<RawInfractionEvent>& events,
                          const PenaltyTable& table) {
  ScoreReport r;
  r.route_completion = rc;
  r.events = events;
  double penalty = 1.0;
  for (const RawInfractionEvent& e : events) {
    penalty *= table.at(e.kind);
    r.counts[e.kind] += 1;
  }
  r.infraction_penalty = penalty;
  r.driving_score = rc * penalty;
  return r;
}

ScoreSummary aggregate(const std::vector<ScoreReport>& reports) {
  if (reports.empty()) {
    throw std::invalid_argument("aggregate: empty report list");
  }
  ScoreSummary s;
  s.routes = reports.size();
  for (const ScoreReport& r : reports) {
    s.mean_ds += r.driving_score;
    s.mean_rc += r.route_completion;
    s.mean_is += r.infraction_penalty;
    for (const auto& [kind, n] : r.counts) {
      s.events_per_route[kind] += n;
    }
  }
  const double n = static_cast<double>(reports.size());
  s.mean_ds /= n;
  s.mean_rc /= n;
  s.mean_is /= n;
  for (auto& [kind, count] : s.events_per_route) {
    count /= n;
  }
  return s;
}

const std::vector<std::pair<std::string, InfractionKind>> kTableColumns = {
    {"Ped", InfractionKind::CollisionPedestrian},
    {"Veh", InfractionKind::CollisionVehicle},
    {"Stat", InfractionKind::CollisionStatic},
    {"Red", InfractionKind::RedLight},
    {"Stop", InfractionKind::StopSign},
    {"Dev", InfractionKind::RouteDeviation},
    {"Spd", InfractionKind::MinSpeed},
    {"Emrg", InfractionKind::EmergencyYield},
    {"Block", InfractionKind::AgentBlocked},
};

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

double column_value(const ScoreSummary& s, InfractionKind k) {
  const auto it = s.events_per_route.find(k);
  return it == s.events_per_route.end() ? 0.0 : it->second;
}

}  // namespace

std::string score_csv_header(const std::string& label_column) {
  std::ostringstream out;
  out << label_column << ",DS,RC,IS";
  for (const auto& [name, kind] : kTableColumns) {
    out << ',' << name;
  }
  return out.str();
}

std::string score_csv_row(const std::string& label, const ScoreSummary& s) {
  std::ostringstream out;
  out << label << ',' << fmt(s.mean_ds) << ',' << fmt(s.mean_rc) << ',' << fmt(s.mean_is);
  for (const auto& [name, kind] : kTableColumns) {
    out << ',' << fmt(column_value(s, kind));
  }
  return out.str();
}

std::string score_markdown_table(const std::vector<std::pair<std::string, ScoreSummary>>& rows) {
  std::ostringstream out;
  out << "| exp | DS | RC | IS";
  for (const auto& [name, kind] : kTableColumns) {
    out << " | " << name;
  }
  out << " |\n|---|---|---|---";
  for (std::size_t i = 0; i < kTableColumns.size(); ++i) {
    out << "|---";
  }
  out << "|\n";
  for (const auto& [label, s] : rows) {
    out << "| " << label << " | " << fmt(s.mean_ds) << " | " << fmt(s.mean_rc) << " | "
        << fmt(s.mean_is);
    for (const auto& [name, kind] : kTableColumns) {
      out << " | " << fmt(column_value(s, kind));
    }
    out << " |\n";
  }
  return out.str();
}

}  // namespace drivesim
