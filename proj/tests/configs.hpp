#pragma once

// Hand-built point configurations shared by the lower-level tests, kept
// independent of the family registry so the two can check each other.

#include <utility>

#include "ahg/geometry.hpp"

namespace ahg::testing {

inline IntVector unit_vector(std::size_t n, std::size_t i) {
  IntVector v(n, 0);
  v[i] = 1;
  return v;
}

inline PointConfig f4_config() {
  std::vector<IntVector> cols;
  for (std::size_t i = 0; i < 4; ++i) cols.push_back(unit_vector(4, i));
  cols.push_back({1, 1, -1, 0});
  cols.push_back({1, 1, 0, -1});
  return PointConfig::from_columns(cols, {1, 1, 1, 1});
}

inline LatticeBasis f4_basis() { return {{{-1, -1, 1, 0, 1, 0}, {-1, -1, 0, 1, 0, 1}}}; }

inline PointConfig g3_config() { return PointConfig::from_columns({{1, 1}, {0, 1}, {-1, 1}, {2, 1}}, {0, 1}); }

/// Columns e_1..e_{n+2}, then e1 + e2 − e_{k+2}; simplices {1,2} plus one of
/// {k+2, n+k+2} for each k.
inline std::pair<PointConfig, Triangulation> fc_config(std::size_t n) {
  std::size_t r = n + 2;
  std::vector<IntVector> cols;
  for (std::size_t i = 0; i < r; ++i) cols.push_back(unit_vector(r, i));
  for (std::size_t k = 0; k < n; ++k) {
    IntVector v(r, 0);
    v[0] = v[1] = 1;
    v[k + 2] = -1;
    cols.push_back(v);
  }
  Triangulation t;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::size_t> s{0, 1};
    for (std::size_t k = 0; k < n; ++k) s.push_back((mask >> k) & 1 ? r + k : k + 2);
    t.simplices.push_back(s);
  }
  return {PointConfig::from_columns(cols, IntVector(r, 1)), t};
}

inline LatticeBasis fc_basis(std::size_t n) {
  LatticeBasis b;
  for (std::size_t k = 0; k < n; ++k) {
    IntVector row(2 * n + 2, 0);
    row[0] = row[1] = -1;
    row[k + 2] = 1;
    row[n + k + 2] = 1;
    b.B.push_back(row);
  }
  return b;
}

}  // namespace ahg::testing
