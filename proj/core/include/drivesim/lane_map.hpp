#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drivesim/geometry.hpp"

namespace drivesim {

struct LaneNeighbor {
  int lane_id{0};
  bool same_direction{true};
};

struct Lane {
  int id{0};
  Polyline centerline;  // arc length strictly increasing, points <= 5 m apart
  double width{3.5};
  double speed_limit{13.89};  // m/s
  std::vector<int> successors;
  std::optional<LaneNeighbor> left;
  std::optional<LaneNeighbor> right;
};

class LaneMap {
 public:
  LaneMap() = default;
  explicit LaneMap(std::vector<Lane> lanes);

  // Parses a "lanemap-v1" JSON document. Throws std::runtime_error with the
  // offending field on schema violations.
  static LaneMap load(const std::string& path);
  static LaneMap from_json_text(const std::string& text, const std::string& origin);

  const Lane* find(int id) const;
  const Lane& at(int id) const;
  const std::map<int, Lane>& lanes() const { return lanes_; }
  bool empty() const { return lanes_.empty(); }

 private:
  std::map<int, Lane> lanes_;
};

struct RoutePlan {
  Polyline reference_path;
  double total_length{0.0};
  std::vector<int> lane_sequence;

  bool empty() const { return reference_path.empty(); }
};

// Concatenates lane centerlines into a route. Gaps between consecutive lanes
// must stay below 0.5 m.
RoutePlan build_route(const LaneMap& map, const std::vector<int>& lane_ids);

}  // namespace drivesim
