#include "drivesim/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace drivesim {

// Successive shortest augmenting paths with dual potentials, extended with a
// virtual "skip" column (index == cols). The skip edge costs `gate` and is
// available to every row, so a row stays unmatched exactly when every
// alternating path to a real column would cost more than the gate. Edges
// above the gate are excluded outright. The new row is scanned before any
// column is settled, which keeps Dijkstra valid for arbitrary finite costs.
AssignmentResult solve_assignment(const CostMatrix& m, double gate) {
  const std::size_t rows = m.rows;
  const std::size_t cols = m.cols;
  for (double c : m.cost) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("solve_assignment: costs must be finite");
    }
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t skip = cols;

  std::vector<int> col_to_row(cols + 1, -1);   // skip entry stays -1 (always free)
  std::vector<int> row_to_col(rows, -1);
  std::vector<double> u(rows, 0.0);
  std::vector<double> v(cols + 1, 0.0);

  auto edge = [&](std::size_t r, std::size_t c) -> double {
    if (c == skip) {
      return gate;
    }
    const double val = m(r, c);
    return val <= gate ? val : kInf;
  };

  std::vector<double> dist(cols + 1);
  std::vector<int> path(cols + 1);
  std::vector<char> scanned_col(cols + 1);
  std::vector<char> scanned_row(rows);

  for (std::size_t cur_row = 0; cur_row < rows; ++cur_row) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(path.begin(), path.end(), -1);
    std::fill(scanned_col.begin(), scanned_col.end(), 0);
    std::fill(scanned_row.begin(), scanned_row.end(), 0);

    double min_val = 0.0;
    std::size_t i = cur_row;
    std::size_t sink = cols + 1;

    while (sink == cols + 1) {
      scanned_row[i] = 1;
      for (std::size_t j = 0; j <= cols; ++j) {
        if (scanned_col[j]) {
          continue;
        }
        const double w = edge(i, j);
        if (w == kInf) {
          continue;
        }
        const double r = min_val + w - u[i] - v[j];
        if (r < dist[j]) {
          dist[j] = r;
          path[j] = static_cast<int>(i);
        }
      }
      std::size_t j_min = cols + 1;
      double lowest = kInf;
      for (std::size_t j = 0; j <= cols; ++j) {
        if (!scanned_col[j] && dist[j] < lowest) {
          lowest = dist[j];
          j_min = j;
        }
      }
      // The skip column is always reachable, so a minimum always exists.
      scanned_col[j_min] = 1;
      min_val = lowest;
      if (col_to_row[j_min] == -1) {
        sink = j_min;
      } else {
        i = static_cast<std::size_t>(col_to_row[j_min]);
      }
    }

    u[cur_row] += min_val;
    for (std::size_t r = 0; r < rows; ++r) {
      if (scanned_row[r] && r != cur_row) {
        u[r] += min_val - dist[static_cast<std::size_t>(row_to_col[r])];
      }
    }
    for (std::size_t j = 0; j <= cols; ++j) {
      if (scanned_col[j]) {
        v[j] -= min_val - dist[j];
      }
    }

    std::size_t j = sink;
    while (true) {
      const int r = path[j];
      if (j != skip) {
        col_to_row[j] = r;
      }
      const int prev = row_to_col[static_cast<std::size_t>(r)];
      row_to_col[static_cast<std::size_t>(r)] = static_cast<int>(j);
      if (static_cast<std::size_t>(r) == cur_row) {
        break;
      }
      j = static_cast<std::size_t>(prev);
    }
  }

  AssignmentResult out;
  for (std::size_t r = 0; r < rows; ++r) {
    const int c = row_to_col[r];
    if (c >= 0 && static_cast<std::size_t>(c) != skip) {
      out.matches.emplace_back(static_cast<int>(r), c);
      out.objective += m(r, static_cast<std::size_t>(c)) - gate;
    } else {
      out.unmatched_rows.push_back(static_cast<int>(r));
    }
  }
  for (std::size_t c = 0; c < cols; ++c) {
    if (col_to_row[c] < 0) {
      out.unmatched_cols.push_back(static_cast<int>(c));
    }
  }
  return out;
}

}  // namespace drivesim
