#pragma once

#include <map>
#include <string>
#include <vector>

#include "ahg/scalars.hpp"

namespace ahg {

/// Sparse polynomial over the Gaussian rationals in a fixed number of variables.
class Poly {
 public:
  using Monomial = std::vector<int>;

  Poly() = default;
  explicit Poly(std::size_t nvars) : nvars_(nvars) {}
  static Poly constant(std::size_t nvars, const GaussianRational& c);
  static Poly variable(std::size_t nvars, std::size_t j);

  std::size_t nvars() const { return nvars_; }
  const std::map<Monomial, GaussianRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  GaussianRational constant_term() const;
  int degree(std::size_t j) const;
  int total_degree() const;

  void add_term(const Monomial& m, const GaussianRational& c);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;
  Poly scaled(const GaussianRational& c) const;
  Poly pow(unsigned n) const;
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  GaussianRational eval(const std::vector<GaussianRational>& point) const;
  /// Substitutes x_j → values[j] for the listed variables, keeping the rest.
  Poly substitute(const std::map<std::size_t, GaussianRational>& values) const;
  /// x_j → x_j + shift[j] for every j.
  Poly shift(const std::vector<Rational>& shift) const;

  std::string to_string(const std::vector<std::string>& names) const;

 private:
  std::size_t nvars_ = 0;
  std::map<Monomial, GaussianRational> terms_;
};

}  // namespace ahg
