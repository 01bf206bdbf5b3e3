#include "ahg/geometry.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace ahg {

namespace {

/// Unimodular row reduction to echelon form on the first ncols columns,
/// with entries above each pivot reduced into [0, pivot). Returns the rank.
std::size_t integer_echelon(Matrix<Integer>& m, std::size_t ncols) {
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    for (;;) {
      std::size_t best = m.size();
      for (std::size_t r = row; r < m.size(); ++r) {
        if (sgn(m[r][col]) == 0) continue;
        if (best == m.size() || abs(m[r][col]) < abs(m[best][col])) best = r;
      }
      if (best == m.size()) break;
      std::swap(m[row], m[best]);
      bool clean = true;
      for (std::size_t r = row + 1; r < m.size(); ++r) {
        if (sgn(m[r][col]) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), m[r][col].get_mpz_t(), m[row][col].get_mpz_t());
        for (std::size_t c = 0; c < m[r].size(); ++c) m[r][c] -= q * m[row][c];
        if (sgn(m[r][col]) != 0) clean = false;
      }
      if (clean) break;
    }
    if (row >= m.size() || sgn(m[row][col]) == 0) continue;
    if (sgn(m[row][col]) < 0)
      for (auto& v : m[row]) v = -v;
    for (std::size_t r = 0; r < row; ++r) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), m[r][col].get_mpz_t(), m[row][col].get_mpz_t());
      if (sgn(q) == 0) continue;
      for (std::size_t c = 0; c < m[r].size(); ++c) m[r][c] -= q * m[row][c];
    }
    ++row;
  }
  return row;
}

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  for (;;) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

Matrix<Rational> inverse(const Matrix<Rational>& a) {
  std::size_t n = a.size();
  Matrix<Rational> aug(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  if (row_reduce(aug, n).size() != n) throw SingularSimplex("singular simplex matrix");
  Matrix<Rational> inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

Matrix<Rational> submatrix(const PointConfig& cfg, const std::vector<std::size_t>& cols) {
  Matrix<Rational> m(cfg.rank(), std::vector<Rational>(cols.size()));
  for (std::size_t i = 0; i < cfg.rank(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) m[i][j] = cfg.A[i][cols[j]];
  return m;
}

}  // namespace

PointConfig::PointConfig(IntMatrix A_, IntVector h_) : A(std::move(A_)), h(std::move(h_)) {
  if (A.empty()) throw InvalidConfig("point configuration has no rows");
  for (const auto& row : A)
    if (row.size() != A.front().size()) throw InvalidConfig("point configuration rows differ in length");
  if (h.size() != A.size()) throw InvalidConfig("linear form h has wrong length");
  for (std::size_t i = 0; i < size(); ++i) {
    long v = 0;
    for (std::size_t k = 0; k < rank(); ++k) v += h[k] * A[k][i];
    if (v != 1) throw InvalidConfig("h(a_" + std::to_string(i + 1) + ") = " + std::to_string(v) + ", expected 1");
  }
}

PointConfig PointConfig::from_columns(const std::vector<IntVector>& columns, IntVector h) {
  if (columns.empty()) throw InvalidConfig("point configuration has no columns");
  IntMatrix A(columns.front().size(), IntVector(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].size() != A.size()) throw InvalidConfig("columns differ in length");
    for (std::size_t k = 0; k < A.size(); ++k) A[k][i] = columns[i][k];
  }
  return PointConfig(std::move(A), std::move(h));
}

IntVector PointConfig::column(std::size_t i) const {
  IntVector c(rank());
  for (std::size_t k = 0; k < rank(); ++k) c[k] = A[k][i];
  return c;
}

bool PointConfig::spans_lattice() const { return maximal_minor_gcd(A) == 1; }

IntVector LatticeBasis::lattice_vector(const IntVector& m) const {
  IntVector l(B.empty() ? 0 : B.front().size(), 0);
  for (std::size_t j = 0; j < B.size(); ++j)
    for (std::size_t i = 0; i < l.size(); ++i) l[i] += m[j] * B[j][i];
  return l;
}

Matrix<Integer> to_integer_matrix(const IntMatrix& m) {
  Matrix<Integer> out;
  for (const auto& row : m) out.emplace_back(row.begin(), row.end());
  return out;
}

Matrix<Integer> hermite_normal_form(Matrix<Integer> m) {
  std::size_t ncols = m.empty() ? 0 : m.front().size();
  std::size_t rank = integer_echelon(m, ncols);
  m.resize(rank);
  return m;
}

LatticeBasis lattice_kernel(const PointConfig& cfg) {
  std::size_t r = cfg.rank(), n = cfg.size();
  // [Aᵀ | I]: rows of the unimodular transform that clear Aᵀ span the kernel.
  Matrix<Integer> m(n, std::vector<Integer>(r + n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < r; ++k) m[i][k] = cfg.A[k][i];
    m[i][r + i] = 1;
  }
  std::size_t rank = integer_echelon(m, r);
  Matrix<Integer> kernel;
  for (std::size_t i = rank; i < n; ++i) kernel.emplace_back(m[i].begin() + static_cast<long>(r), m[i].end());
  kernel = hermite_normal_form(std::move(kernel));
  LatticeBasis out;
  for (const auto& row : kernel) {
    IntVector v;
    for (const auto& x : row) v.push_back(x.get_si());
    out.B.push_back(std::move(v));
  }
  return out;
}

bool same_lattice(const IntMatrix& a, const IntMatrix& b) {
  return hermite_normal_form(to_integer_matrix(a)) == hermite_normal_form(to_integer_matrix(b));
}

Integer determinant(const Matrix<Integer>& input) {
  // Bareiss fraction-free elimination.
  Matrix<Integer> m = input;
  std::size_t n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m[k][k]) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(m[p][k]) == 0) ++p;
      if (p == n) return 0;
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

Integer maximal_minor_gcd(const IntMatrix& m) {
  if (m.empty()) return 1;
  std::size_t rows = m.size(), cols = m.front().size();
  Integer g = 0;
  for_each_subset(cols, rows, [&](const std::vector<std::size_t>& idx) {
    Matrix<Integer> sub(rows, std::vector<Integer>(rows));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < rows; ++j) sub[i][j] = m[i][idx[j]];
    Integer d = determinant(sub);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
  });
  return g;
}

Integer simplex_det(const PointConfig& cfg, const std::vector<std::size_t>& simplex) {
  if (simplex.size() != cfg.rank()) throw SingularSimplex("simplex has wrong number of vertices");
  Matrix<Integer> sub(cfg.rank(), std::vector<Integer>(cfg.rank()));
  for (std::size_t i = 0; i < cfg.rank(); ++i)
    for (std::size_t j = 0; j < simplex.size(); ++j) {
      if (simplex[j] >= cfg.size()) throw SingularSimplex("simplex index out of range");
      sub[i][j] = cfg.A[i][simplex[j]];
    }
  return determinant(sub);
}

long simplex_volume(const PointConfig& cfg, const Triangulation& t) {
  long total = 0;
  for (const auto& s : t.simplices) {
    Integer d = simplex_det(cfg, s);
    if (sgn(d) == 0) throw SingularSimplex("degenerate simplex in triangulation");
    total += Integer(abs(d)).get_si();
  }
  return total;
}

bool lattice_equivalent(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!is_integer(a[i] - b[i])) return false;
  return true;
}

std::vector<std::vector<Rational>> gamma_candidates(const PointConfig& cfg, const std::vector<Rational>& beta,
                                                    const std::vector<std::size_t>& simplex) {
  long det = Integer(abs(simplex_det(cfg, simplex))).get_si();
  if (det == 0) throw SingularSimplex("degenerate simplex");
  auto inv = inverse(submatrix(cfg, simplex));
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < cfg.size(); ++i)
    if (std::find(simplex.begin(), simplex.end(), i) == simplex.end()) rest.push_back(i);

  std::vector<std::vector<Rational>> found;
  IntVector assign(rest.size(), 0);
  for (;;) {
    std::vector<Rational> rhs = beta;
    for (std::size_t j = 0; j < rest.size(); ++j)
      for (std::size_t k = 0; k < cfg.rank(); ++k) rhs[k] -= Rational(assign[j] * cfg.A[k][rest[j]]);
    std::vector<Rational> gamma(cfg.size());
    for (std::size_t j = 0; j < rest.size(); ++j) gamma[rest[j]] = assign[j];
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      Rational v = 0;
      for (std::size_t k = 0; k < cfg.rank(); ++k) v += inv[i][k] * rhs[k];
      gamma[simplex[i]] = v;
    }
    bool fresh = std::none_of(found.begin(), found.end(),
                              [&](const auto& g) { return lattice_equivalent(g, gamma); });
    if (fresh) found.push_back(std::move(gamma));
    if (static_cast<long>(found.size()) == det) break;
    std::size_t p = 0;
    while (p < assign.size() && ++assign[p] == det) assign[p++] = 0;
    if (p == assign.size()) break;
  }
  return found;
}

NormalityVerdict normality_probe(const PointConfig& cfg, long bound) {
  NormalityVerdict verdict;
  verdict.bound = bound;
  std::size_t r = cfg.rank(), n = cfg.size();

  std::vector<Matrix<Rational>> cones;
  for_each_subset(n, r, [&](const std::vector<std::size_t>& idx) {
    if (sgn(simplex_det(cfg, idx)) != 0) cones.push_back(inverse(submatrix(cfg, idx)));
  });
  auto in_cone = [&](const IntVector& p) {
    return std::any_of(cones.begin(), cones.end(), [&](const Matrix<Rational>& inv) {
      for (const auto& row : inv) {
        Rational v = 0;
        for (std::size_t k = 0; k < r; ++k) v += row[k] * p[k];
        if (sgn(v) < 0) return false;
      }
      return true;
    });
  };

  IntVector lo(r), hi(r);
  for (std::size_t k = 0; k < r; ++k) {
    lo[k] = *std::min_element(cfg.A[k].begin(), cfg.A[k].end());
    hi[k] = *std::max_element(cfg.A[k].begin(), cfg.A[k].end());
  }
  std::set<IntVector> layer{IntVector(r, 0)};
  for (long level = 1; level <= bound; ++level) {
    std::set<IntVector> next;
    for (const auto& p : layer)
      for (std::size_t i = 0; i < n; ++i) {
        IntVector q = p;
        for (std::size_t k = 0; k < r; ++k) q[k] += cfg.A[k][i];
        next.insert(std::move(q));
      }
    layer = std::move(next);

    IntVector p(r);
    for (std::size_t k = 0; k < r; ++k) p[k] = level * lo[k];
    for (;;) {
      long hv = 0;
      for (std::size_t k = 0; k < r; ++k) hv += cfg.h[k] * p[k];
      if (hv == level && !layer.count(p) && in_cone(p)) {
        verdict.normal_up_to_bound = false;
        verdict.counterexample = p;
        return verdict;
      }
      bool advanced = false;
      for (std::size_t k = r; k-- > 0;) {
        if (p[k] < level * hi[k]) {
          ++p[k];
          for (std::size_t j = k + 1; j < r; ++j) p[j] = level * lo[j];
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
  }
  return verdict;
}

}  // namespace ahg
