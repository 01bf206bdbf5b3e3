#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ahg/poly.hpp"
#include "ahg/scalars.hpp"

namespace ahg {

/// Parsed arithmetic expression shared by operators, recipes and the family
/// file format. Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' unary)?
///   atom   := integer | name | name '(' expr (',' expr)* ')' | '(' expr ')'
struct Expr {
  enum class Kind { Number, Symbol, Call, Add, Sub, Mul, Div, Neg, Pow };

  Kind kind = Kind::Number;
  Rational number;
  std::string name;
  std::vector<std::shared_ptr<const Expr>> args;

  std::string to_string() const;
};
using ExprPtr = std::shared_ptr<const Expr>;

ExprPtr parse_expression(std::string_view text);

ExprPtr make_number(const Rational& q);
ExprPtr make_symbol(std::string name);
ExprPtr make_node(Expr::Kind kind, std::vector<ExprPtr> args);

/// Named expressions visible while lowering ("let" definitions).
using Scope = std::map<std::string, ExprPtr>;

/// Lowers to a polynomial. `vars` maps symbol names to variable indices;
/// `i` is the imaginary unit; scope names are expanded. Division is only
/// allowed by constants and exponents must be non-negative integers.
Poly to_poly(const ExprPtr& e, const std::map<std::string, std::size_t>& vars, std::size_t nvars,
             const Scope& scope = {});

/// Folds an expression to a rational constant, throwing ParseError otherwise.
Rational to_rational(const ExprPtr& e, const Scope& scope = {});

/// Polynomial in r (single variable) over the Gaussian rationals.
Poly to_r_poly(const ExprPtr& e, const Scope& scope = {});

/// a + b·r with rational a, b.
struct AffineR {
  Rational c0 = 0;
  Rational c1 = 0;

  Rational at(const Rational& r) const { return c0 + c1 * r; }
  std::string to_string() const;
  friend bool operator==(const AffineR&, const AffineR&) = default;
};

AffineR to_affine_r(const ExprPtr& e, const Scope& scope = {});

/// Splits "a, b, c" at top-level commas.
std::vector<std::string> split_top_level(std::string_view text, char sep = ',');

}  // namespace ahg
