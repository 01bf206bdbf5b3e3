#include "ahg/gammaseries.hpp"

#include <cstdlib>

#include "ahg/linalg.hpp"

namespace ahg {

namespace {

// Visits every m ∈ Z^d with |m|₁ ≤ radius in lexicographic order.
template <class F>
void for_each_in_ball(std::size_t d, long radius, F&& f) {
  IntVector m(d, -radius);
  auto l1 = [&] {
    long s = 0;
    for (long v : m) s += std::labs(v);
    return s;
  };
  for (;;) {
    if (l1() <= radius) f(m);
    std::size_t k = d;
    bool advanced = false;
    while (k-- > 0) {
      if (m[k] < radius) {
        ++m[k];
        for (std::size_t j = k + 1; j < d; ++j) m[j] = -radius;
        advanced = true;
        break;
      }
    }
    if (!advanced) return;
  }
}

}  // namespace

Rational TwistedSeries::coeff(const IntVector& m) const {
  auto it = coeffs.find(m);
  return it == coeffs.end() ? Rational(0) : it->second;
}

TwistedSeries gamma_series(const PointConfig& cfg, const LatticeBasis& basis, const std::vector<Rational>& gamma,
                           long radius) {
  TwistedSeries ts{gamma, basis, {}, radius};
  // Validate the base point once so DegenerateBase surfaces even for radius 0.
  for (const auto& g : gamma) invgamma_ratio(g, 0);
  (void)cfg;
  for_each_in_ball(basis.dim(), radius, [&](const IntVector& m) {
    IntVector l = basis.lattice_vector(m);
    Rational c = 1;
    for (std::size_t i = 0; i < l.size() && sgn(c) != 0; ++i)
      if (l[i] != 0) c *= invgamma_ratio(gamma[i], l[i]);
    if (sgn(c) != 0) ts.coeffs.emplace(m, std::move(c));
  });
  return ts;
}

std::vector<Rational> lattice_offset(const LatticeBasis& basis, const std::vector<Rational>& gamma,
                                     const std::vector<Rational>& gamma_ref) {
  std::size_t n = gamma.size(), d = basis.dim();
  Matrix<Rational> bt(n, std::vector<Rational>(d));
  std::vector<Rational> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) bt[i][j] = basis.B[j][i];
    rhs[i] = gamma[i] - gamma_ref[i];
  }
  auto sol = solve_linear(bt, rhs);
  if (!sol.consistent) throw OffsetUnsolvable("γ − γ_ref is not in the row span of B");
  return sol.x;
}

PuiseuxSeries dehomogenize(const TwistedSeries& ts, const DehomFrame& frame, long order) {
  std::size_t d = ts.basis.dim();
  PuiseuxSeries out(frame.grid, lattice_offset(ts.basis, ts.gamma, frame.gamma_ref), order);
  for (const auto& [m, c] : ts.coeffs) {
    Exponent e(d);
    bool negative = false;
    int sign = 1;
    for (std::size_t j = 0; j < d; ++j) {
      if (m[j] < 0) negative = true;
      e[j] = static_cast<int>(m[j]) * frame.grid.ram[j];
      if (!frame.signs.empty() && frame.signs[j] < 0 && (m[j] % 2 != 0)) sign = -sign;
    }
    if (out.weight(e) >= order) continue;
    if (negative) throw OffsetUnsolvable("Γ-series has support below the dehomogenization offset");
    out.add_term(e, GaussianRational(sign * c));
  }
  return out;
}

HomogenizedSeries homogenize(const PuiseuxSeries& s, const LatticeBasis& basis, const DehomFrame& frame) {
  PuiseuxSeries t = s;
  for (std::size_t j = 0; j < frame.signs.size(); ++j)
    if (frame.signs[j] < 0) t = negate_variable(t, j);
  return {frame.gamma_ref, basis, std::move(t)};
}

HomogenizedSeries homogenize(const TwistedSeries& ts, const ExponentGrid& grid, long order) {
  std::size_t d = ts.basis.dim();
  PuiseuxSeries s(grid, order);
  for (const auto& [m, c] : ts.coeffs) {
    Exponent e(d);
    for (std::size_t j = 0; j < d; ++j) e[j] = static_cast<int>(m[j]) * grid.ram[j];
    bool inside = true;
    for (int v : e) inside = inside && v >= 0;
    if (!inside) throw OffsetUnsolvable("Γ-series has negative lattice support");
    s.add_term(e, GaussianRational(c));
  }
  return {ts.gamma, ts.basis, std::move(s)};
}

HomogenizedSeries apply_partial(const HomogenizedSeries& hs, std::size_t i) {
  HomogenizedSeries out{hs.mu, hs.basis, scale(hs.S, GaussianRational(hs.mu[i]))};
  out.mu[i] -= 1;
  for (std::size_t j = 0; j < hs.basis.dim(); ++j) {
    long b = hs.basis.B[j][i];
    if (b != 0) out.S = add(out.S, scale(theta(hs.S, j), GaussianRational(b)));
  }
  return out;
}

PuiseuxSeries structure_residual(const HomogenizedSeries& hs, const IntVector& l) {
  HomogenizedSeries plus = hs, minus = hs;
  for (std::size_t i = 0; i < l.size(); ++i) {
    for (long k = 0; k < l[i]; ++k) plus = apply_partial(plus, i);
    for (long k = 0; k < -l[i]; ++k) minus = apply_partial(minus, i);
  }
  std::vector<Rational> lq(l.begin(), l.end());
  auto m = lattice_offset(hs.basis, lq, std::vector<Rational>(l.size(), Rational(0)));
  return sub(plus.S, minus.S.shifted(m));
}

std::vector<PuiseuxSeries> euler_residual(const HomogenizedSeries& hs, const PointConfig& cfg,
                                          const std::vector<Rational>& beta) {
  std::vector<PuiseuxSeries> thetas;
  for (std::size_t k = 0; k < hs.basis.dim(); ++k) thetas.push_back(theta(hs.S, k));
  std::vector<PuiseuxSeries> out;
  for (std::size_t j = 0; j < cfg.rank(); ++j) {
    Rational eigen = -beta[j];
    for (std::size_t i = 0; i < cfg.size(); ++i) eigen += cfg.A[j][i] * hs.mu[i];
    PuiseuxSeries r = scale(hs.S, GaussianRational(eigen));
    for (std::size_t k = 0; k < hs.basis.dim(); ++k) {
      long ab = 0;
      for (std::size_t i = 0; i < cfg.size(); ++i) ab += cfg.A[j][i] * hs.basis.B[k][i];
      if (ab != 0) r = add(r, scale(thetas[k], GaussianRational(ab)));
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ahg
