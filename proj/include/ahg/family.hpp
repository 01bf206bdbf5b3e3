#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahg/expr.hpp"
#include "ahg/geometry.hpp"
#include "ahg/homops.hpp"
#include "ahg/poly.hpp"
#include "ahg/recipe.hpp"

namespace ahg {

class FamilyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnknownFamily : public FamilyError {
 public:
  using FamilyError::FamilyError;
};

struct BasisEntry {
  std::vector<std::size_t> simplex;  // 0-based column indices
  std::vector<AffineR> gamma;
};

struct Definition {
  std::string name;
  std::string text;
};

enum class Expectation { Pass, Fail, Open };

std::string to_string(Expectation e);

struct FamilyVariant {
  std::string name;
  std::string title;
  std::vector<Definition> definitions;
  std::optional<std::string> curve;
  std::optional<Expectation> expect;
};

/// One hypergeometric family: the point configuration with its parameters,
/// the local basis, the Horn operators and the closed form to verify.
struct FamilySpec {
  std::string name;
  std::string title;
  std::vector<std::string> variables;
  ExponentGrid grid;
  std::vector<int> signs;
  PointConfig config;
  LatticeBasis lattice;
  std::vector<AffineR> beta;
  std::vector<BasisEntry> basis;
  std::size_t reference = 0;
  std::vector<Poly> coefficients;  // polynomials in r, one per basis entry
  std::vector<std::string> coefficient_text;
  std::vector<std::string> horn;
  std::optional<long> horn_rank;
  std::vector<Definition> definitions;
  std::vector<std::string> relations;
  std::vector<std::string> extras;
  bool power_form = true;
  std::string curve;         // polynomial in the variables and F
  std::string discriminant;  // definition name the curve's discriminant must equal
  Expectation expect = Expectation::Pass;
  long default_order = 12;
  std::string variant;  // applied variant, empty for the base family
  std::vector<FamilyVariant> variants;

  std::size_t arity() const { return variables.size(); }
  Triangulation triangulation() const;
  std::vector<Rational> beta_at(const Rational& r) const;
  std::vector<Rational> gamma_at(std::size_t k, const Rational& r) const;
  std::vector<ThetaOperator> horn_operators() const;
  const Definition* find_definition(const std::string& name) const;
  /// Name including the variant, e.g. "G3/table4-plus-x".
  std::string display_name() const;
};

/// Parses one or more families from the text format described in
/// docs/family-format.md. `source` names the input in error messages.
std::vector<FamilySpec> parse_families(const std::string& text, const std::string& source = "<input>");
std::vector<FamilySpec> load_family_file(const std::string& path);

/// Copy of the family with the named variant's overrides applied.
FamilySpec apply_variant(const FamilySpec& base, const std::string& variant);

/// Checks the declared data against itself: A·γ_k = β at sample r, lattice
/// rows span the kernel, one basis entry per unit of volume, operators and
/// recipes parse. Throws FamilyError.
void validate_family(const FamilySpec& spec);

/// Family text for the confluent FC family k ∈ {1,2,3} in n variables.
std::string fc_family_text(int k, std::size_t n);

/// Built-in families. FC families are generated for the given n.
const std::vector<FamilySpec>& registry();
std::vector<FamilySpec> registry_with_fc(std::size_t n);

/// Looks a family up by name; F4-k is an alias for FC-k with n = 2.
FamilySpec find_family(const std::string& name, std::size_t n = 2);
std::vector<std::string> family_names();

/// Compiled closed-form recipes of a family.
struct FamilyRecipes {
  std::map<std::string, Recipe> named;
  Recipe phi;
  std::vector<std::pair<std::string, Recipe>> relations;
  std::vector<Recipe> extras;
  std::vector<std::string> slots;
};

FamilyRecipes compile_recipes(const FamilySpec& spec);

/// Discriminant of a polynomial of degree 2 or 3 in its last variable.
Poly discriminant_last(const Poly& p);
/// The family curve as a polynomial in the variables followed by F.
Poly family_curve(const FamilySpec& spec);
/// The named definition expanded as a polynomial in the variables.
Poly definition_poly(const FamilySpec& spec, const std::string& name);

}  // namespace ahg
