#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahg/expr.hpp"
#include "ahg/pseries.hpp"

namespace ahg {

class SeedNotRoot : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class RamificationRequired : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct RecipeNode;
using Recipe = std::shared_ptr<const RecipeNode>;

/// Closed-form expression tree evaluated to a truncated series.
struct RecipeNode {
  enum class Kind {
    Const,        // value
    RConst,       // polynomial in r (rpoly)
    Var,          // z_var
    VarRoot,      // ±√z_var, sign from slot
    Monomial,     // z^{exponents(r)}
    Add,
    Mul,
    Neg,
    Inv,
    PowInt,       // child^power, power ≥ 0
    PowRat,       // child^{exponent(r)}
    Sqrt,         // ±√child relative to the canonical root
    DivMonomial,  // exact division by z^monomial
    AlgRoot,      // root of Σ children[k]·F^k near seed
  };

  Kind kind = Kind::Const;
  GaussianRational value;
  Poly rpoly;
  std::size_t var = 0;
  std::string slot;
  long power = 0;
  AffineR exponent;
  std::vector<AffineR> exponents;
  std::vector<Rational> monomial;
  GaussianRational seed;
  std::vector<int> ram_hint;
  std::vector<Recipe> children;
};

Recipe recipe_const(const GaussianRational& c);
Recipe recipe_node(RecipeNode::Kind kind, std::vector<Recipe> children);

/// Lowers parsed expressions to recipes over the named variables. Names in
/// the scope are lowered once and shared, so evaluation reuses them.
///   sqrt(e) / sqrt(e, slot)        square root, optional branch slot
///   algroot(P(F), seed[, slot][, ram(k1,…)])
///   a/b                            exact monomial division when b is a monomial
///   e^p                            p an affine function of r
class RecipeCompiler {
 public:
  explicit RecipeCompiler(std::vector<std::string> variables) : variables_(std::move(variables)) {}

  void define(const std::string& name, const ExprPtr& e);
  bool defined(const std::string& name) const { return compiled_.count(name) > 0; }
  Recipe get(const std::string& name) const;
  Recipe compile(const ExprPtr& e);

 private:
  Recipe lower(const ExprPtr& e);
  std::optional<std::size_t> var_index(const std::string& name) const;
  /// Monomial coefficient·z^m when e is a product of powers of variables.
  std::optional<std::pair<Rational, std::vector<Rational>>> as_monomial(const ExprPtr& e) const;
  std::map<long, Recipe> as_f_polynomial(const ExprPtr& e);

  std::vector<std::string> variables_;
  std::map<std::string, Recipe> compiled_;
  Scope scope_;
};

/// Branch slot names referenced anywhere in the given recipes.
std::set<std::string> branch_slots(const std::vector<Recipe>& recipes);

using BranchAssignment = std::map<std::string, int>;

/// Evaluates recipes at fixed r and branch assignment with memoization, so
/// shared sub-recipes (h, f, …) are expanded once per order.
class RecipeEvaluator {
 public:
  RecipeEvaluator(ExponentGrid grid, Rational r, BranchAssignment branches)
      : grid_(std::move(grid)), r_(std::move(r)), branches_(std::move(branches)) {}

  PuiseuxSeries eval(const Recipe& rec, long order);
  const Rational& r() const { return r_; }
  const ExponentGrid& grid() const { return grid_; }

 private:
  PuiseuxSeries compute(const RecipeNode& n, long order);
  int sign(const std::string& slot) const;

  ExponentGrid grid_;
  Rational r_;
  BranchAssignment branches_;
  std::map<std::pair<const RecipeNode*, long>, PuiseuxSeries> memo_;
};

PuiseuxSeries eval_recipe(const Recipe& rec, const Rational& r, long order, const ExponentGrid& grid,
                          const BranchAssignment& branches = {});

/// Series root f of Σ coeffs[k]·f^k = 0 with f(0) = seed. Newton iteration
/// when seed is a simple root; for a double root the coefficients are
/// re-expressed on the hint grid and the root is lifted term by term through
/// the unique weight-one monomial, whose coefficient solves a quadratic
/// (branch picks the root relative to the canonical square root).
PuiseuxSeries algebraic_root(const std::vector<PuiseuxSeries>& coeffs, const GaussianRational& seed,
                             const std::vector<int>& ram_hint = {}, Branch branch = Branch::Positive);

/// Σ coeffs[k]·f^k by Horner's rule.
PuiseuxSeries eval_polynomial(const std::vector<PuiseuxSeries>& coeffs, const PuiseuxSeries& f);

}  // namespace ahg
