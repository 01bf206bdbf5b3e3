#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "ahg/geometry.hpp"
#include "ahg/pseries.hpp"

namespace ahg {

class OffsetUnsolvable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// z^γ · Σ_m c(m) z^{Bᵀm}, m over lattice coordinates with |m|₁ ≤ radius.
struct TwistedSeries {
  std::vector<Rational> gamma;
  LatticeBasis basis;
  std::map<IntVector, Rational> coeffs;
  long radius = 0;

  Rational coeff(const IntVector& m) const;
};

/// z^μ · S(t) with t_j = z^{b_j}, b_j the rows of B.
struct HomogenizedSeries {
  std::vector<Rational> mu;
  LatticeBasis basis;
  PuiseuxSeries S;
};

/// How an N-variable series is read in d variables: the reference exponent,
/// the grid of the result, and variable signs x_j = σ_j t_j.
struct DehomFrame {
  std::vector<Rational> gamma_ref;
  ExponentGrid grid;
  std::vector<int> signs;
};

/// c(m) = ∏_i Γ(γ_i+1)/Γ(γ_i+(Bᵀm)_i+1), normalized so c(0) = 1.
TwistedSeries gamma_series(const PointConfig& cfg, const LatticeBasis& basis, const std::vector<Rational>& gamma,
                           long radius);

/// δ with γ − γ_ref = Bᵀδ.
std::vector<Rational> lattice_offset(const LatticeBasis& basis, const std::vector<Rational>& gamma,
                                     const std::vector<Rational>& gamma_ref);

/// Σ c(m)·σ^m x^{δ+m} on the frame grid, truncated at `order`. The radius of
/// ts must cover every m of weight below the order.
PuiseuxSeries dehomogenize(const TwistedSeries& ts, const DehomFrame& frame, long order);

/// Lift a d-variable series in the frame's x variables to z^{γ_ref}·S(t).
HomogenizedSeries homogenize(const PuiseuxSeries& s, const LatticeBasis& basis, const DehomFrame& frame);
HomogenizedSeries homogenize(const TwistedSeries& ts, const ExponentGrid& grid, long order);

HomogenizedSeries apply_partial(const HomogenizedSeries& hs, std::size_t i);

/// S⁺ − t^m·S⁻ where S^± come from applying ∏ ∂_i^{l_i^±} and l = Bᵀm;
/// the structure equation for l holds iff this vanishes.
PuiseuxSeries structure_residual(const HomogenizedSeries& hs, const IntVector& l);

/// One residual per row j of (Σ_i a_{ji} z_i∂_i − β_j) applied to hs, divided by z^μ.
std::vector<PuiseuxSeries> euler_residual(const HomogenizedSeries& hs, const PointConfig& cfg,
                                          const std::vector<Rational>& beta);

}  // namespace ahg
