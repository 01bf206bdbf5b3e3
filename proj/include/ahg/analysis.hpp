#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahg/family.hpp"
#include "ahg/pseries.hpp"

namespace ahg {

class ResonantParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RankDeficient : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ResidualNonzero : public std::domain_error {
 public:
  ResidualNonzero(const std::string& what, MismatchCertificate cert)
      : std::domain_error(what), certificate_(std::move(cert)) {}
  const MismatchCertificate& certificate() const { return certificate_; }

 private:
  MismatchCertificate certificate_;
};

/// Throws ResonantParameter when 2r is an integer.
void require_nonresonant(const Rational& r, const std::string& what = "r");

struct BasisElement {
  std::string label;
  PuiseuxSeries series;
  bool extra = false;
};

/// Dehomogenized Γ-series, one per basis entry, followed by the family's
/// extra Horn solutions when requested.
std::vector<BasisElement> build_basis(const FamilySpec& family, const Rational& r, long order,
                                      bool include_extras = true);

/// Exact coefficients x with Σ x_k basis_k = target on every monomial that
/// all series know. Rows are eliminated in weight order so an inconsistency
/// is reported at the lowest offending monomial.
std::vector<GaussianRational> decompose(const PuiseuxSeries& target, const std::vector<PuiseuxSeries>& basis);

/// Σ coeffs[k]·basis[k], skipping zero coefficients.
PuiseuxSeries combine(const std::vector<GaussianRational>& coeffs, const std::vector<PuiseuxSeries>& basis);

/// Registry coefficients c_k(r) (zero for extras).
std::vector<GaussianRational> family_coefficients(const FamilySpec& family, const Rational& r,
                                                  std::size_t count);

enum class CheckStatus { Pass, Fail, Skipped };
std::string to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  long verified_order = 0;
  std::optional<MismatchCertificate> certificate;
  std::string detail;
};

struct BranchOutcome {
  BranchAssignment branches;
  bool pass = false;
  std::vector<CheckResult> checks;
  std::optional<MismatchCertificate> certificate;
};

struct Verdict {
  std::string family;
  std::string title;
  std::vector<std::string> variables;
  Rational r;
  long order = 0;
  bool pass = false;
  Expectation expect = Expectation::Pass;
  BranchAssignment branch;  // assignment that validated, or the first one tried
  std::vector<CheckResult> checks;
  std::optional<MismatchCertificate> certificate;
  std::vector<std::string> decomposition;  // exact coefficients when the solve succeeded
  std::vector<BranchOutcome> branches;
};

struct VerifyOptions {
  long order = 12;
  std::optional<BranchAssignment> branch;  // explicit assignment; search all when empty
  Rational power_s = 0;
};

/// All 2^k assignments of the given slots, all-positive first.
std::vector<BranchAssignment> branch_assignments(const std::vector<std::string>& slots);

Verdict verify_family(const FamilySpec& family, const Rational& r, const VerifyOptions& options);

/// Residual of Φ(r)Φ(s) − Φ((r+s)/2)².
std::optional<MismatchCertificate> power_relation_residual(const PuiseuxSeries& phi_r, const PuiseuxSeries& phi_s,
                                                           const PuiseuxSeries& phi_mid);

enum class PowerRoute { ClosedForm, Basis };

Verdict power_relation_check(const FamilySpec& family, const Rational& r, const Rational& s, long order,
                             PowerRoute route = PowerRoute::ClosedForm,
                             const std::optional<BranchAssignment>& branch = std::nullopt);

/// Φ(r) = Σ c_k(r)·Φ_k(r) from the Γ-series basis.
PuiseuxSeries basis_combination(const FamilySpec& family, const Rational& r, long order);

struct ExtractResult {
  PuiseuxSeries f;
  PuiseuxSeries g;
  std::vector<Rational> samples;
  bool independent = false;  // same (f, g) from every pair of samples
  std::optional<MismatchCertificate> independence_certificate;
  bool power_relation = false;  // Φ(a)Φ(b) = f^{a+b} g² for every pair
  std::optional<MismatchCertificate> power_certificate;
};

/// f = (Φ(r1)/Φ(r2))^{1/(r1−r2)} and g = Φ(r1)·f^{−r1}, checked against all
/// pairs drawn from {r1, r2} ∪ extra.
ExtractResult extract_fg(const FamilySpec& family, const Rational& r1, const Rational& r2, long order,
                         const std::vector<Rational>& extra = {});

struct ExtraSolutionReport {
  std::string label;
  bool annihilated = false;
  bool structure_nonzero = false;
};

struct CensusReport {
  std::string family;
  long volume = 0;
  std::vector<std::pair<std::string, long>> gamma_counts;
  long gamma_total = 0;
  long horn_rank = 0;
  bool normal_up_to_bound = true;
  long normality_bound = 0;
  std::vector<ExtraSolutionReport> extras;
};

CensusReport rank_census(const FamilySpec& family, const Rational& r = Rational(1, 3));

/// The curve polynomial evaluated at a series f, as a series.
PuiseuxSeries curve_residual(const FamilySpec& family, const PuiseuxSeries& f);

struct VerifyJob {
  FamilySpec family;
  Rational r;
  VerifyOptions options;
};

/// Runs the jobs concurrently; results come back in job order.
std::vector<Verdict> verify_all(const std::vector<VerifyJob>& jobs, unsigned threads = 0);

/// Default acceptance sample values of r.
std::vector<Rational> default_r_values();

std::string simplex_label(const std::vector<std::size_t>& simplex);

}  // namespace ahg

namespace ahg {

/// A coefficient of the closed form as a polynomial in r.
struct SymbolicTerm {
  std::vector<Rational> exponent;
  Poly coefficient;  // one variable, r
};

/// Terms of the closed form up to the given weight (family grid units) with
/// coefficients interpolated in r from sample evaluations. The degree bound
/// is the weight; one extra sample confirms each interpolant. Throws
/// std::domain_error when a coefficient is not such a polynomial.
std::vector<SymbolicTerm> symbolic_head(const FamilySpec& family, long max_weight, const BranchAssignment& branch);

}  // namespace ahg
