#pragma once

// Geometry checks on region maps shared by the unit tests and the acceptance run.

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "choquard/regimes.hpp"

namespace region_check {

struct Summary {
  int boundary_pairs = 0;
  int stray_pairs = 0;      // adjacent cells with different codes far from every line
  double worst_cells = 0;   // largest distance to the nearest line, in cell diagonals
  std::set<std::string> codes;
};

inline Summary boundaries(const choquard::regimes::RegionMap& m,
                          const std::vector<choquard::regimes::Line>& lines) {
  Summary s;
  const int n = m.resolution;
  const double dp = (m.p_range.hi - m.p_range.lo) / (n - 1), dq = (m.q_range.hi - m.q_range.lo) / (n - 1);
  const double cell = std::hypot(dp, dq);
  for (const auto& c : m.codes) s.codes.insert(c);
  auto visit = [&](int i0, int j0, int i1, int j1) {
    if (m.at(i0, j0) == m.at(i1, j1)) return;
    ++s.boundary_pairs;
    const double p = 0.5 * (m.p_at(i0) + m.p_at(i1)), q = 0.5 * (m.q_at(j0) + m.q_at(j1));
    double best = INFINITY;
    for (const auto& l : lines) best = std::min(best, std::abs(l.signed_distance(p, q)));
    s.worst_cells = std::max(s.worst_cells, best / cell);
    if (best > cell) ++s.stray_pairs;
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (i + 1 < n) visit(i, j, i + 1, j);
      if (j + 1 < n) visit(i, j, i, j + 1);
    }
  return s;
}

// Number of boundary pairs within one cell of `line`; used to confirm each
// expected line actually shows up in the map.
inline int pairs_near(const choquard::regimes::RegionMap& m, const choquard::regimes::Line& line) {
  const int n = m.resolution;
  const double dp = (m.p_range.hi - m.p_range.lo) / (n - 1), dq = (m.q_range.hi - m.q_range.lo) / (n - 1);
  const double cell = std::hypot(dp, dq);
  int count = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i + 1 < n; ++i)
      if (m.at(i, j) != m.at(i + 1, j) &&
          std::abs(line.signed_distance(0.5 * (m.p_at(i) + m.p_at(i + 1)), m.q_at(j))) <= cell)
        ++count;
  for (int j = 0; j + 1 < n; ++j)
    for (int i = 0; i < n; ++i)
      if (m.at(i, j) != m.at(i, j + 1) &&
          std::abs(line.signed_distance(m.p_at(i), 0.5 * (m.q_at(j) + m.q_at(j + 1)))) <= cell)
        ++count;
  return count;
}

// Codes found among cells with q < q_max.
inline std::set<std::string> codes_below(const choquard::regimes::RegionMap& m, double q_max) {
  std::set<std::string> out;
  for (int j = 0; j < m.resolution; ++j)
    if (m.q_at(j) < q_max)
      for (int i = 0; i < m.resolution; ++i) out.insert(m.at(i, j));
  return out;
}

}  // namespace region_check
