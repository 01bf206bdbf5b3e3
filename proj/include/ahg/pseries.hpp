#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahg/scalars.hpp"

namespace ahg {

/// Exponent vector in grid units: entry e_j encodes z_j^{e_j/k_j}.
using Exponent = std::vector<int>;

/// Per-variable ramification. Truncation weights are measured in units of
/// 1/K with K = lcm(k_j), so the weight of e is K·Σ e_j/k_j.
struct ExponentGrid {
  std::vector<int> ram;

  ExponentGrid() = default;
  explicit ExponentGrid(std::vector<int> ram_);
  static ExponentGrid uniform(std::size_t nvars, int k) { return ExponentGrid(std::vector<int>(nvars, k)); }

  std::size_t nvars() const { return ram.size(); }
  long lcm() const;
  long unit(std::size_t j) const { return lcm() / ram[j]; }
  long weight(const Exponent& e) const;

  friend bool operator==(const ExponentGrid&, const ExponentGrid&) = default;
};

class NonUnit : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NonRepresentableConstantPower : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// First monomial (lowest weight, then lexicographic) where two series
/// disagree, given by its absolute rational exponent.
struct MismatchCertificate {
  std::vector<Rational> exponent;
  GaussianRational expected;
  GaussianRational actual;
  std::string context;
};

class NotDivisible : public std::domain_error {
 public:
  NotDivisible(const std::string& what, std::vector<Rational> monomial, GaussianRational coefficient = {})
      : std::domain_error(what), monomial_(std::move(monomial)), coefficient_(std::move(coefficient)) {}
  /// Absolute exponent of the offending term and its coefficient.
  const std::vector<Rational>& monomial() const { return monomial_; }
  const GaussianRational& coefficient() const { return coefficient_; }

 private:
  std::vector<Rational> monomial_;
  GaussianRational coefficient_;
};

enum class Branch { Positive, Negative };

inline int sign_of(Branch b) { return b == Branch::Positive ? 1 : -1; }

/// Truncated multivariate Puiseux series
///   z^offset · Σ_e c_e z^{e/k}
/// known exactly for all relative exponents e of weight < order.
class PuiseuxSeries {
 public:
  using TermMap = std::map<Exponent, GaussianRational>;

  PuiseuxSeries() = default;
  PuiseuxSeries(ExponentGrid grid, long order);
  PuiseuxSeries(ExponentGrid grid, std::vector<Rational> offset, long order);

  static PuiseuxSeries constant(const ExponentGrid& grid, const GaussianRational& c, long order);
  /// c·z^{e/k} (e in grid units) with zero offset.
  static PuiseuxSeries monomial(const ExponentGrid& grid, const Exponent& e, const GaussianRational& c,
                                long order);
  /// The single variable z_j (exponent k_j in grid units).
  static PuiseuxSeries variable(const ExponentGrid& grid, std::size_t j, long order);

  const ExponentGrid& grid() const { return grid_; }
  std::size_t nvars() const { return grid_.nvars(); }
  const std::vector<Rational>& offset() const { return offset_; }
  long order() const { return order_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  GaussianRational coeff(const Exponent& e) const;
  /// Adds c to the coefficient at e; ignored when weight(e) ≥ order.
  void add_term(const Exponent& e, const GaussianRational& c);
  void set_term(const Exponent& e, GaussianRational c);

  std::vector<Rational> absolute_exponent(const Exponent& e) const;
  long weight(const Exponent& e) const { return grid_.weight(e); }
  /// Lowest stored weight; order() when the series is zero.
  long valuation() const;
  GaussianRational constant_term() const;

  PuiseuxSeries truncated(long order) const;
  /// Re-express on another ramification (refinement, or coarsening when all
  /// exponents divide). Order is rescaled so the known region is unchanged.
  PuiseuxSeries regrid(const std::vector<int>& ram) const;
  /// Lower the offset to new_offset (componentwise ≤), shifting exponents.
  PuiseuxSeries with_offset(const std::vector<Rational>& new_offset) const;
  /// Same terms, offset replaced (multiplies by a monomial).
  PuiseuxSeries shifted(const std::vector<Rational>& delta) const;

  PuiseuxSeries operator-() const;
  PuiseuxSeries& operator*=(const GaussianRational& c);

  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  ExponentGrid grid_;
  std::vector<Rational> offset_;
  TermMap terms_;
  long order_ = 0;
};

/// Regrids and re-offsets both operands onto a common frame.
std::pair<PuiseuxSeries, PuiseuxSeries> align(const PuiseuxSeries& a, const PuiseuxSeries& b);

PuiseuxSeries add(const PuiseuxSeries& a, const PuiseuxSeries& b);
PuiseuxSeries sub(const PuiseuxSeries& a, const PuiseuxSeries& b);
PuiseuxSeries scale(const PuiseuxSeries& a, const GaussianRational& c);
PuiseuxSeries mul(const PuiseuxSeries& a, const PuiseuxSeries& b);
PuiseuxSeries pow_int(const PuiseuxSeries& a, long n);

inline PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b) { return add(a, b); }
inline PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return sub(a, b); }
inline PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) { return mul(a, b); }
inline PuiseuxSeries operator*(const GaussianRational& c, const PuiseuxSeries& a) { return scale(a, c); }

/// 1/a. With factor_monomial, a lowest monomial dividing every term is
/// pulled out first; otherwise a zero constant term raises NonUnit.
PuiseuxSeries invert(const PuiseuxSeries& a, bool factor_monomial = false);

/// Formal logarithm of a series with zero offset and constant term 1.
PuiseuxSeries log_unit(const PuiseuxSeries& a);
/// Formal exponential of a series with zero offset and zero constant term.
PuiseuxSeries exp_series(const PuiseuxSeries& a);

/// a^α = ±c^α·exp(α·log(a/c)); the branch sign applies to the canonical
/// root when α has denominator 2, and must be Positive otherwise.
PuiseuxSeries pow_rational(const PuiseuxSeries& a, const Rational& alpha, Branch branch = Branch::Positive);

/// θ_j = z_j ∂/∂z_j; the eigenvalue on a monomial includes the offset.
PuiseuxSeries theta(const PuiseuxSeries& a, std::size_t j);

enum class DivisionMode { Strict, Shift };

/// Divides by z^m. Strict keeps the offset and requires every stored term to
/// be divisible (NotDivisible otherwise); Shift moves the offset by −m.
PuiseuxSeries monomial_div(const PuiseuxSeries& a, const std::vector<Rational>& m,
                           DivisionMode mode = DivisionMode::Strict);
/// Lowest stored monomial not divisible by z^m, if any.
std::optional<std::vector<Rational>> first_non_divisible(const PuiseuxSeries& a, const std::vector<Rational>& m);

/// z_j → −z_j using the principal phase (−1)^q = i^{2q}; requires every
/// relative exponent of z_j to lie in ½Z. The offset's constant phase is dropped.
PuiseuxSeries negate_variable(const PuiseuxSeries& a, std::size_t j);

/// Sets z_j = 0 (keeps only terms without z_j); requires offset_j = 0.
PuiseuxSeries restrict_zero(const PuiseuxSeries& a, std::size_t j);

/// First disagreement below the common valid order, or nullopt.
std::optional<MismatchCertificate> first_difference(const PuiseuxSeries& expected,
                                                    const PuiseuxSeries& actual);
inline bool equal_to_order(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  return !first_difference(a, b).has_value();
}

std::string format_exponent(const std::vector<Rational>& exponent, const std::vector<std::string>& names = {});

}  // namespace ahg
