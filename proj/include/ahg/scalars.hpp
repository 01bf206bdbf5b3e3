#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ahg {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised when a Γ-series base point has a negative-integer entry, so the
/// normalizing term 1/Γ(γ+1) is itself zero.
class DegenerateBase : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

bool is_integer(const Rational& q);
/// Exact square root of a non-negative rational, if it exists.
std::optional<Rational> exact_sqrt(const Rational& q);

/// a + b·i with exact rational parts. mpq_class keeps both parts canonical.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational re) : re_(std::move(re)) {}  // NOLINT
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }
  /// Accepts "p/q", "p/q+r/s*i", "r/s*i", "i", "-i", "2-3*i".
  static GaussianRational parse(std::string_view text);

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }
  GaussianRational inverse() const;
  GaussianRational pow(long n) const;

  /// Canonical exact square root (positive real part; if the real part is
  /// zero, non-negative imaginary part), or nullopt when not a Gaussian rational.
  std::optional<GaussianRational> sqrt() const;

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);
  /// this += a·b without temporaries for the common real case.
  void add_product(const GaussianRational& a, const GaussianRational& b);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  std::string to_string() const;

 private:
  Rational re_{0};
  Rational im_{0};
};

/// Γ(γ+1)/Γ(γ+l+1) as an exact rational; exact zero when 1/Γ(γ+l+1) vanishes.
/// Throws DegenerateBase when γ is a negative integer.
Rational invgamma_ratio(const Rational& gamma, long l);

/// Rising factorial (a)_n for n ≥ 0.
Rational pochhammer(const Rational& a, long n);

}  // namespace ahg
