#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahg/expr.hpp"
#include "ahg/poly.hpp"
#include "ahg/pseries.hpp"

namespace ahg {

class InsufficientOrder : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Σ_a z^a · P_a(θ_1..θ_d, r): the θ-polynomial acts first, then the
/// monomial multiplies. Poly variables are θ_1..θ_d followed by r.
class ThetaOperator {
 public:
  ThetaOperator() = default;
  ThetaOperator(std::size_t nvars, std::map<std::vector<Rational>, Poly> terms, std::string text = {});

  /// Grammar of expr.hpp with theta(v) for θ_v (v a variable name or a
  /// 1-based index), variable names for z-monomials, r and i.
  static ThetaOperator parse(std::string_view text, const std::vector<std::string>& variables,
                             const Scope& scope = {});
  static ThetaOperator from_expr(const ExprPtr& e, const std::vector<std::string>& variables,
                                 const Scope& scope = {});

  std::size_t nvars() const { return nvars_; }
  const std::map<std::vector<Rational>, Poly>& terms() const { return terms_; }
  const std::string& text() const { return text_; }
  /// Largest monomial weight on the given grid (units of 1/lcm).
  long degree_shift(const ExponentGrid& grid) const;

  ThetaOperator operator+(const ThetaOperator& o) const;
  ThetaOperator operator*(const ThetaOperator& o) const;
  ThetaOperator scaled(const GaussianRational& c) const;

 private:
  std::size_t nvars_ = 0;
  std::map<std::vector<Rational>, Poly> terms_;
  std::string text_;
};

/// Applies op at the given r. The result is trusted below
/// s.order() − degree_shift (in the result's grid units).
PuiseuxSeries apply_theta_op(const ThetaOperator& op, const PuiseuxSeries& s, const Rational& r);

struct AnnihilationVerdict {
  bool annihilated = false;
  long verified_order = 0;
  std::optional<MismatchCertificate> certificate;
};

/// Throws InsufficientOrder when s.order() does not exceed the degree shift.
AnnihilationVerdict annihilation_check(const ThetaOperator& op, const PuiseuxSeries& s, const Rational& r);

/// Lowest-weight nonzero term of a residual as a certificate against zero.
std::optional<MismatchCertificate> first_nonzero(const PuiseuxSeries& residual, const std::string& context = {});

}  // namespace ahg
