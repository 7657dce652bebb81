#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace drivesim {

// Row-major rectangular cost matrix.
struct CostMatrix {
  std::size_t rows{0};
  std::size_t cols{0};
  std::vector<double> cost;  // rows * cols entries

  double operator()(std::size_t r, std::size_t c) const { return cost[r * cols + c]; }
  double& operator()(std::size_t r, std::size_t c) { return cost[r * cols + c]; }
};

struct AssignmentResult {
  std::vector<std::pair<int, int>> matches;  // (row, col), sorted by row
  std::vector<int> unmatched_rows;
  std::vector<int> unmatched_cols;
  // Objective optimized: sum over matches of (cost - gate). Matching a pair
  // cheaper than the gate always pays; pairs above the gate are never matched.
  double objective{0.0};
};

// Min-cost partial assignment on a rectangular matrix with a hard gate.
// Every row may instead stay unmatched at the gate price, so the result
// minimizes sum(cost - gate) over all gate-feasible one-to-one matchings.
// Exact: shortest augmenting paths with potentials, no square padding.
AssignmentResult solve_assignment(const CostMatrix& cost, double gate);

}  // namespace drivesim
