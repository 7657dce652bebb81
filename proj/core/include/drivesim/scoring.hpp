#pragma once

#include <map>
#include <string>
#include <vector>

#include "drivesim/lane_map.hpp"
#include "drivesim/types.hpp"

namespace drivesim {

// Multiplicative penalty per infraction kind, coefficients in (0, 1].
struct PenaltyTable {
  std::map<InfractionKind, double> coeff = {
      {InfractionKind::CollisionPedestrian, 0.50},
      {InfractionKind::CollisionVehicle, 0.60},
      {InfractionKind::CollisionStatic, 0.65},
      {InfractionKind::RedLight, 0.70},
      {InfractionKind::StopSign, 0.80},
      {InfractionKind::MinSpeed, 0.70},
      {InfractionKind::EmergencyYield, 0.70},
      {InfractionKind::RouteDeviation, 0.70},
      {InfractionKind::AgentBlocked, 0.70},
      {InfractionKind::Timeout, 0.70},
  };

  double at(InfractionKind k) const;  // throws on unknown kind
};

struct ScoreReport {
  double route_completion{0.0};    // RC, percent [0, 100]
  double infraction_penalty{1.0};  // IS, product of coefficients, (0, 1]
  double driving_score{0.0};       // DS == RC * IS
  std::vector<RawInfractionEvent> events;
  std::map<InfractionKind, int> counts;
};

struct ScoreSummary {
  double mean_ds{0.0};
  double mean_rc{0.0};
  double mean_is{0.0};
  std::map<InfractionKind, double> events_per_route;
  std::size_t routes{0};
};

// Percentage of the route arc length reached by the trace: max projected s,
// no backtracking credit. Returns 100 exactly when the final route point was
// approached within 5 m.
double route_completion(const RoutePlan& route, const std::vector<Pose2D>& trace);

ScoreReport compute_score(double rc, const std::vector<RawInfractionEvent>& events,
                          const PenaltyTable& table);

ScoreSummary aggregate(const std::vector<ScoreReport>& reports);

// CSV row in the fixed column order
// DS,RC,IS,Ped,Veh,Stat,Red,Stop,Dev,Spd,Emrg,Block.
extern const std::vector<std::pair<std::string, InfractionKind>> kTableColumns;
std::string score_csv_header(const std::string& label_column);
std::string score_csv_row(const std::string& label, const ScoreSummary& s);
std::string score_markdown_table(const std::vector<std::pair<std::string, ScoreSummary>>& rows);

}  // namespace drivesim
