#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ahg/scalars.hpp"

namespace ahg {

inline bool is_zero_scalar(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero_scalar(const GaussianRational& q) { return q.is_zero(); }

template <class T>
using Matrix = std::vector<std::vector<T>>;

/// Reduced row echelon form in place; returns the pivot columns.
template <class T>
std::vector<std::size_t> row_reduce(Matrix<T>& m, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t p = row;
    while (p < m.size() && is_zero_scalar(m[p][col])) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    T inv = T(1) / m[row][col];
    for (auto& v : m[row]) v = v * inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || is_zero_scalar(m[r][col])) continue;
      T f = m[r][col];
      for (std::size_t c = col; c < m[r].size(); ++c)
        if (!is_zero_scalar(m[row][c])) m[r][c] = m[r][c] - f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class T>
struct LinearSolution {
  std::vector<T> x;  // particular solution, free variables set to zero
  std::size_t rank = 0;
  bool consistent = false;
};

/// Solves M·x = b.
template <class T>
LinearSolution<T> solve_linear(const Matrix<T>& m, const std::vector<T>& b) {
  std::size_t n = m.empty() ? 0 : m.front().size();
  Matrix<T> aug;
  aug.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    aug.push_back(m[i]);
    aug.back().push_back(b[i]);
  }
  auto pivots = row_reduce(aug, n);
  LinearSolution<T> out;
  out.rank = pivots.size();
  out.x.assign(n, T(0));
  out.consistent = true;
  for (std::size_t r = pivots.size(); r < aug.size(); ++r)
    if (!is_zero_scalar(aug[r][n])) out.consistent = false;
  for (std::size_t r = 0; r < pivots.size(); ++r) out.x[pivots[r]] = aug[r][n];
  return out;
}

}  // namespace ahg
