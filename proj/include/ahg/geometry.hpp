#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahg/linalg.hpp"
#include "ahg/scalars.hpp"

namespace ahg {

using IntVector = std::vector<long>;
using IntMatrix = std::vector<IntVector>;

class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularSimplex : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Point configuration A (r×N, columns a_i) with a linear form h, h(a_i) = 1.
struct PointConfig {
  IntMatrix A;
  IntVector h;

  PointConfig() = default;
  /// Throws InvalidConfig unless A is rectangular and h·A = (1,…,1).
  PointConfig(IntMatrix A_, IntVector h_);
  static PointConfig from_columns(const std::vector<IntVector>& columns, IntVector h);

  std::size_t rank() const { return A.size(); }
  std::size_t size() const { return A.empty() ? 0 : A.front().size(); }
  IntVector column(std::size_t i) const;
  /// gcd of the maximal minors is 1, i.e. ZA = Z^r.
  bool spans_lattice() const;
};

/// Rows span the integer kernel of A.
struct LatticeBasis {
  IntMatrix B;

  std::size_t dim() const { return B.size(); }
  /// Bᵀ·m.
  IntVector lattice_vector(const IntVector& m) const;
};

/// Simplices as 0-based column index sets.
struct Triangulation {
  std::vector<std::vector<std::size_t>> simplices;
};

/// Canonical (Hermite normal form) basis of ker_Z(A).
LatticeBasis lattice_kernel(const PointConfig& cfg);

/// Row Hermite normal form with zero rows removed.
Matrix<Integer> hermite_normal_form(Matrix<Integer> m);
Matrix<Integer> to_integer_matrix(const IntMatrix& m);

/// Whether the rows of a and b generate the same subgroup of Z^N.
bool same_lattice(const IntMatrix& a, const IntMatrix& b);
/// gcd of all maximal minors (the product of the Smith invariant factors).
Integer maximal_minor_gcd(const IntMatrix& m);
Integer determinant(const Matrix<Integer>& m);

Integer simplex_det(const PointConfig& cfg, const std::vector<std::size_t>& simplex);
/// Σ|det A_I|; throws SingularSimplex on a degenerate simplex.
long simplex_volume(const PointConfig& cfg, const Triangulation& t);

/// All |det A_I| solutions of A·γ = β with γ_j ∈ Z off I, pairwise distinct
/// modulo the lattice of relations. Scans the complement box [0, |det A_I|).
std::vector<std::vector<Rational>> gamma_candidates(const PointConfig& cfg, const std::vector<Rational>& beta,
                                                    const std::vector<std::size_t>& simplex);

/// γ − γ′ ∈ ker_Z(A), assuming both solve A·γ = β.
bool lattice_equivalent(const std::vector<Rational>& a, const std::vector<Rational>& b);

struct NormalityVerdict {
  bool normal_up_to_bound = true;
  long bound = 0;
  std::optional<IntVector> counterexample;
};

/// Checks that every lattice point of cone(A) with h-value ≤ bound is a
/// non-negative integer combination of the a_i.
NormalityVerdict normality_probe(const PointConfig& cfg, long bound);

}  // namespace ahg
