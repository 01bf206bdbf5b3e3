#include "ahg/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <tuple>
#include <thread>

#include "ahg/gammaseries.hpp"
#include "ahg/homops.hpp"

namespace ahg {

void require_nonresonant(const Rational& r, const std::string& what) {
  Rational twice = 2 * r;
  twice.canonicalize();
  if (is_integer(twice))
    throw ResonantParameter(what + " = " + to_string(r) + " is resonant (2" + what +
                            " is an integer); choose a value outside Z/2");
}

std::string simplex_label(const std::vector<std::size_t>& simplex) {
  std::string s = "{";
  for (std::size_t k = 0; k < simplex.size(); ++k) s += (k ? "," : "") + std::to_string(simplex[k] + 1);
  return s + "}";
}

std::vector<Rational> default_r_values() { return {Rational(1, 3), Rational(2, 5), Rational(3, 7)}; }

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Skipped:
      return "skipped";
  }
  return "?";
}

namespace {

DehomFrame frame_for(const FamilySpec& family, const Rational& r) {
  return {family.gamma_at(family.reference, r), family.grid, family.signs};
}

long lattice_radius(const FamilySpec& family, long order) {
  long k = family.grid.lcm();
  return (order + k - 1) / k;
}

}  // namespace

std::vector<BasisElement> build_basis(const FamilySpec& family, const Rational& r, long order, bool include_extras) {
  require_nonresonant(r);
  DehomFrame frame = frame_for(family, r);
  long radius = lattice_radius(family, order);
  std::vector<BasisElement> out;
  for (std::size_t k = 0; k < family.basis.size(); ++k) {
    auto ts = gamma_series(family.config, family.lattice, family.gamma_at(k, r), radius);
    out.push_back({simplex_label(family.basis[k].simplex), dehomogenize(ts, frame, order), false});
  }
  if (include_extras && !family.extras.empty()) {
    auto recipes = compile_recipes(family);
    for (std::size_t k = 0; k < recipes.extras.size(); ++k)
      out.push_back({"extra " + std::to_string(k + 1), eval_recipe(recipes.extras[k], r, order, family.grid), true});
  }
  return out;
}

namespace {

using AbsExponent = std::vector<Rational>;

/// Coefficient of a series at an absolute exponent, or nullopt when the
/// series does not know it.
std::optional<GaussianRational> known_coeff(const PuiseuxSeries& s, const AbsExponent& e) {
  Exponent rel(e.size());
  for (std::size_t j = 0; j < e.size(); ++j) {
    Rational q = (e[j] - s.offset()[j]) * s.grid().ram[j];
    q.canonicalize();
    if (!is_integer(q) || sgn(q) < 0) return GaussianRational(0);
    rel[j] = static_cast<int>(q.get_num().get_si());
  }
  if (s.weight(rel) >= s.order()) return std::nullopt;
  return s.coeff(rel);
}

bool exponent_less(const AbsExponent& a, const AbsExponent& b) {
  Rational sa = 0, sb = 0;
  for (const auto& q : a) sa += q;
  for (const auto& q : b) sb += q;
  if (sa != sb) return sa < sb;
  return a < b;
}

struct Row {
  std::vector<GaussianRational> a;
  GaussianRational b;
};

}  // namespace

std::vector<GaussianRational> decompose(const PuiseuxSeries& target, const std::vector<PuiseuxSeries>& basis) {
  std::size_t n = basis.size();
  std::set<AbsExponent> keys;
  auto collect = [&](const PuiseuxSeries& s) {
    for (const auto& [e, c] : s.terms())
      if (!c.is_zero()) keys.insert(s.absolute_exponent(e));
  };
  collect(target);
  for (const auto& s : basis) collect(s);
  std::vector<AbsExponent> rows(keys.begin(), keys.end());
  std::sort(rows.begin(), rows.end(), exponent_less);

  std::vector<std::pair<std::size_t, Row>> pivots;
  auto solution = [&]() {
    std::vector<GaussianRational> x(n);
    for (std::size_t k = pivots.size(); k-- > 0;) {
      const auto& [p, row] = pivots[k];
      GaussianRational v = row.b;
      for (std::size_t j = 0; j < n; ++j)
        if (j != p && !row.a[j].is_zero()) v -= row.a[j] * x[j];
      x[p] = v;
    }
    return x;
  };

  for (const auto& key : rows) {
    Row row{std::vector<GaussianRational>(n), 0};
    bool known = true;
    for (std::size_t k = 0; k < n && known; ++k) {
      auto c = known_coeff(basis[k], key);
      if (!c) known = false;
      else row.a[k] = *c;
    }
    auto t = known_coeff(target, key);
    if (!known || !t) continue;
    row.b = *t;
    for (const auto& [p, prow] : pivots) {
      if (row.a[p].is_zero()) continue;
      GaussianRational factor = row.a[p];
      for (std::size_t j = 0; j < n; ++j)
        if (!prow.a[j].is_zero()) row.a[j] -= factor * prow.a[j];
      row.b -= factor * prow.b;
    }
    auto lead = std::find_if(row.a.begin(), row.a.end(), [](const GaussianRational& v) { return !v.is_zero(); });
    if (lead == row.a.end()) {
      if (row.b.is_zero()) continue;
      auto x = solution();
      GaussianRational expected = 0;
      for (std::size_t k = 0; k < n; ++k) {
        auto c = known_coeff(basis[k], key);
        if (c && !x[k].is_zero()) expected += x[k] * *c;
      }
      MismatchCertificate cert{key, expected, *t, "decomposition residual"};
      throw ResidualNonzero("target is not in the span of the basis: residual at " + format_exponent(key), cert);
    }
    std::size_t p = static_cast<std::size_t>(lead - row.a.begin());
    GaussianRational inv = row.a[p].inverse();
    for (auto& v : row.a) v *= inv;
    row.b *= inv;
    pivots.emplace_back(p, std::move(row));
  }
  if (pivots.size() < n) {
    std::vector<bool> has(n, false);
    for (const auto& [p, row] : pivots) has[p] = true;
    std::string free;
    for (std::size_t k = 0; k < n; ++k)
      if (!has[k]) free += (free.empty() ? "" : ", ") + std::to_string(k + 1);
    throw RankDeficient("basis is rank deficient on the known monomials (undetermined: " + free + ")");
  }
  return solution();
}

PuiseuxSeries combine(const std::vector<GaussianRational>& coeffs, const std::vector<PuiseuxSeries>& basis) {
  std::optional<PuiseuxSeries> acc;
  for (std::size_t k = 0; k < coeffs.size() && k < basis.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    PuiseuxSeries term = scale(basis[k], coeffs[k]);
    acc = acc ? add(*acc, term) : term;
  }
  if (!acc) {
    if (basis.empty()) throw std::invalid_argument("combine: empty basis");
    return PuiseuxSeries(basis.front().grid(), basis.front().order());
  }
  return *acc;
}

std::vector<GaussianRational> family_coefficients(const FamilySpec& family, const Rational& r, std::size_t count) {
  if (family.coefficients.empty()) throw std::invalid_argument("family " + family.name + " declares no coefficients");
  std::vector<GaussianRational> out(count);
  for (std::size_t k = 0; k < count && k < family.coefficients.size(); ++k)
    out[k] = family.coefficients[k].eval({GaussianRational(r)});
  return out;
}

std::vector<BranchAssignment> branch_assignments(const std::vector<std::string>& slots) {
  std::vector<BranchAssignment> out;
  for (unsigned mask = 0; mask < (1u << slots.size()); ++mask) {
    BranchAssignment a;
    for (std::size_t j = 0; j < slots.size(); ++j) a[slots[j]] = (mask >> j) & 1 ? -1 : 1;
    out.push_back(a);
  }
  return out;
}

PuiseuxSeries curve_residual(const FamilySpec& family, const PuiseuxSeries& f) {
  Poly curve = family_curve(family);
  std::size_t d = family.arity();
  std::vector<PuiseuxSeries> powers{PuiseuxSeries::constant(f.grid(), 1, f.order())};
  PuiseuxSeries acc(f.grid(), f.order());
  for (const auto& [m, c] : curve.terms()) {
    while (static_cast<int>(powers.size()) <= m[d]) powers.push_back(mul(powers.back(), f));
    Exponent e(d);
    for (std::size_t j = 0; j < d; ++j) e[j] = m[j] * f.grid().ram[j];
    acc = add(acc, mul(PuiseuxSeries::monomial(f.grid(), e, c, f.order()), powers[m[d]]));
  }
  return acc;
}

std::optional<MismatchCertificate> power_relation_residual(const PuiseuxSeries& phi_r, const PuiseuxSeries& phi_s,
                                                           const PuiseuxSeries& phi_mid) {
  auto cert = first_difference(mul(phi_mid, phi_mid), mul(phi_r, phi_s));
  if (cert) cert->context = "power relation";
  return cert;
}

namespace {

CheckResult from_certificate(const std::string& name, const std::optional<MismatchCertificate>& cert, long order,
                             const std::string& detail = {}) {
  CheckResult c;
  c.name = name;
  c.status = cert ? CheckStatus::Fail : CheckStatus::Pass;
  c.verified_order = order;
  c.certificate = cert;
  c.detail = detail;
  return c;
}

CheckResult skipped(const std::string& name, const std::string& why) {
  CheckResult c;
  c.name = name;
  c.detail = why;
  return c;
}

/// Keeps the first failing certificate; later ones only fill in when none is set.
void merge_failure(CheckResult& into, const std::optional<MismatchCertificate>& cert, long order) {
  into.verified_order = into.verified_order == 0 ? order : std::min(into.verified_order, order);
  if (!cert) return;
  into.status = CheckStatus::Fail;
  if (!into.certificate) into.certificate = cert;
}

std::optional<MismatchCertificate> polynomial_difference(const Poly& expected, const Poly& actual,
                                                         const std::string& context) {
  Poly diff = actual - expected;
  if (diff.is_zero()) return std::nullopt;
  // Lowest total degree first, then lexicographic.
  const Poly::Monomial* best = nullptr;
  int best_deg = 0;
  for (const auto& [m, c] : diff.terms()) {
    int deg = 0;
    for (int v : m) deg += v;
    if (!best || deg < best_deg) {
      best = &m;
      best_deg = deg;
    }
  }
  auto coeff = [&](const Poly& p) {
    auto it = p.terms().find(*best);
    return it == p.terms().end() ? GaussianRational(0) : it->second;
  };
  std::vector<Rational> e(best->begin(), best->end());
  return MismatchCertificate{e, coeff(expected), coeff(actual), context};
}

struct ClosedForms {
  FamilyRecipes recipes;
  std::vector<BasisElement> basis;
  std::vector<PuiseuxSeries> basis_series;
  std::optional<PuiseuxSeries> expected;  // Σ c_k Φ_k
};

BranchOutcome verify_branch(const FamilySpec& family, const Rational& r, const VerifyOptions& opt,
                            const ClosedForms& cf, const BranchAssignment& branch,
                            std::optional<PuiseuxSeries>* phi_out) {
  BranchOutcome out;
  out.branches = branch;
  RecipeEvaluator ev(family.grid, r, branch);
  long order = opt.order;
  auto ops = family.horn_operators();
  long shift = 0;
  for (const auto& op : ops) shift = std::max(shift, op.degree_shift(family.grid));

  PuiseuxSeries phi;
  CheckResult closed{"closed-form", CheckStatus::Pass, order, std::nullopt, {}};
  try {
    phi = ev.eval(cf.recipes.phi, order + shift);
  } catch (const NotDivisible& e) {
    closed.status = CheckStatus::Fail;
    closed.certificate = MismatchCertificate{e.monomial(), 0, e.coefficient(), "exact monomial division"};
    closed.detail = e.what();
  } catch (const std::domain_error& e) {
    closed.status = CheckStatus::Fail;
    closed.detail = e.what();
  }
  out.checks.push_back(closed);
  if (closed.status == CheckStatus::Fail) {
    out.certificate = closed.certificate;
    for (const char* name :
         {"basis-identity", "horn-annihilation", "gkz-structure", "gkz-euler", "defining-relations", "power-relation"})
      out.checks.push_back(skipped(name, "closed form could not be evaluated"));
    return out;
  }
  PuiseuxSeries phi_o = phi.truncated(std::min(phi.order(), phi.order() - shift));
  if (phi_out) *phi_out = phi_o;

  // Closed form against the registry combination of Γ-series.
  if (cf.expected) {
    auto cert = first_difference(*cf.expected, phi_o);
    if (cert) cert->context = "closed form vs basis combination";
    out.checks.push_back(from_certificate("basis-identity", cert, std::min(cf.expected->order(), phi_o.order())));
  } else {
    out.checks.push_back(skipped("basis-identity", "no coefficients declared"));
  }

  if (!ops.empty()) {
    CheckResult horn{"horn-annihilation", CheckStatus::Pass, 0, std::nullopt, {}};
    for (std::size_t k = 0; k < ops.size(); ++k) {
      auto v = annihilation_check(ops[k], phi, r);
      if (v.certificate) v.certificate->context = "horn operator " + std::to_string(k + 1);
      merge_failure(horn, v.certificate, v.verified_order);
    }
    out.checks.push_back(horn);
  } else {
    out.checks.push_back(skipped("horn-annihilation", "no Horn operators declared"));
  }

  HomogenizedSeries hs = homogenize(phi_o, family.lattice, frame_for(family, r));
  CheckResult structure{"gkz-structure", CheckStatus::Pass, 0, std::nullopt, {}};
  for (std::size_t k = 0; k < family.lattice.B.size(); ++k) {
    PuiseuxSeries res = structure_residual(hs, family.lattice.B[k]);
    merge_failure(structure, first_nonzero(res, "structure equation " + std::to_string(k + 1)), res.order());
  }
  out.checks.push_back(structure);
  CheckResult euler{"gkz-euler", CheckStatus::Pass, 0, std::nullopt, {}};
  auto eres = euler_residual(hs, family.config, family.beta_at(r));
  for (std::size_t j = 0; j < eres.size(); ++j)
    merge_failure(euler, first_nonzero(eres[j], "Euler row " + std::to_string(j + 1)), eres[j].order());
  out.checks.push_back(euler);

  bool any_relation = !cf.recipes.relations.empty() || !family.curve.empty() || !family.discriminant.empty();
  if (any_relation) {
    CheckResult rel{"defining-relations", CheckStatus::Pass, 0, std::nullopt, {}};
    std::vector<std::string> notes;
    for (const auto& [text, rec] : cf.recipes.relations) {
      PuiseuxSeries res = ev.eval(rec, order);
      merge_failure(rel, first_nonzero(res, "relation " + text), res.order());
      notes.push_back("relation");
    }
    if (!family.curve.empty() && cf.recipes.named.count("f")) {
      PuiseuxSeries res = curve_residual(family, ev.eval(cf.recipes.named.at("f"), order));
      merge_failure(rel, first_nonzero(res, "curve at f"), res.order());
      notes.push_back("curve");
    }
    if (!family.discriminant.empty()) {
      auto cert = polynomial_difference(definition_poly(family, family.discriminant),
                                        discriminant_last(family_curve(family)),
                                        "discriminant of the curve vs " + family.discriminant);
      merge_failure(rel, cert, order);
      notes.push_back("discriminant");
    }
    std::string detail;
    for (const auto& n : notes) detail += (detail.empty() ? "" : ", ") + n;
    rel.detail = detail;
    out.checks.push_back(rel);
  } else {
    out.checks.push_back(skipped("defining-relations", "none declared"));
  }

  if (family.power_form) {
    Rational s = opt.power_s, mid = (r + s) / 2;
    mid.canonicalize();
    RecipeEvaluator ev_s(family.grid, s, branch), ev_mid(family.grid, mid, branch);
    try {
      auto cert = power_relation_residual(phi_o, ev_s.eval(cf.recipes.phi, order), ev_mid.eval(cf.recipes.phi, order));
      out.checks.push_back(from_certificate("power-relation", cert, order, "s = " + to_string(s)));
    } catch (const std::domain_error& e) {
      CheckResult c{"power-relation", CheckStatus::Fail, 0, std::nullopt, e.what()};
      out.checks.push_back(c);
    }
  } else {
    out.checks.push_back(skipped("power-relation", "closed form is not of the form f^r g"));
  }

  out.pass = true;
  for (const auto& c : out.checks) {
    if (c.status != CheckStatus::Fail) continue;
    out.pass = false;
    if (!out.certificate && c.certificate) out.certificate = c.certificate;
  }
  return out;
}

}  // namespace

Verdict verify_family(const FamilySpec& family, const Rational& r, const VerifyOptions& opt) {
  require_nonresonant(r);
  Verdict v;
  v.family = family.display_name();
  v.title = family.title;
  v.variables = family.variables;
  v.r = r;
  v.order = opt.order;
  v.expect = family.expect;

  ClosedForms cf{compile_recipes(family), {}, {}, std::nullopt};
  cf.basis = build_basis(family, r, opt.order);
  for (const auto& b : cf.basis) cf.basis_series.push_back(b.series);
  if (!family.coefficients.empty())
    cf.expected = combine(family_coefficients(family, r, cf.basis_series.size()), cf.basis_series);

  std::vector<BranchAssignment> assignments;
  if (opt.branch) {
    for (const auto& [slot, sign] : *opt.branch)
      if (std::find(cf.recipes.slots.begin(), cf.recipes.slots.end(), slot) == cf.recipes.slots.end())
        throw std::invalid_argument("family " + family.name + " has no branch slot '" + slot + "'");
    BranchAssignment full;
    for (const auto& s : cf.recipes.slots) full[s] = opt.branch->count(s) ? opt.branch->at(s) : 1;
    assignments.push_back(full);
  } else {
    assignments = branch_assignments(cf.recipes.slots);
  }

  std::optional<PuiseuxSeries> chosen_phi;
  std::size_t chosen = 0;
  bool found = false;
  for (std::size_t k = 0; k < assignments.size(); ++k) {
    std::optional<PuiseuxSeries> phi;
    v.branches.push_back(verify_branch(family, r, opt, cf, assignments[k], &phi));
    if (!found && v.branches.back().pass) {
      found = true;
      chosen = k;
      chosen_phi = phi;
    }
    if (k == 0 && !found) chosen_phi = phi;
  }
  const BranchOutcome& report = v.branches[chosen];
  v.pass = found;
  v.branch = report.branches;
  v.checks = report.checks;
  v.certificate = report.certificate;
  if (chosen_phi) {
    try {
      for (const auto& c : decompose(*chosen_phi, cf.basis_series)) v.decomposition.push_back(c.to_string());
    } catch (const std::domain_error&) {
      // The basis-identity check already carries the certificate.
    }
  }
  return v;
}

PuiseuxSeries basis_combination(const FamilySpec& family, const Rational& r, long order) {
  auto basis = build_basis(family, r, order);
  std::vector<PuiseuxSeries> series;
  for (const auto& b : basis) series.push_back(b.series);
  return combine(family_coefficients(family, r, series.size()), series);
}

Verdict power_relation_check(const FamilySpec& family, const Rational& r, const Rational& s, long order,
                             PowerRoute route, const std::optional<BranchAssignment>& branch) {
  Rational mid = (r + s) / 2;
  mid.canonicalize();
  Verdict v;
  v.family = family.display_name();
  v.title = family.title;
  v.variables = family.variables;
  v.r = r;
  v.order = order;
  v.expect = family.expect;
  std::string detail = "s = " + to_string(s);
  if (route == PowerRoute::Basis) {
    require_nonresonant(r);
    require_nonresonant(s, "s");
    require_nonresonant(mid, "(r+s)/2");
    auto cert = power_relation_residual(basis_combination(family, r, order), basis_combination(family, s, order),
                                        basis_combination(family, mid, order));
    BranchOutcome b;
    b.checks.push_back(from_certificate("power-relation", cert, order, detail + ", basis route"));
    b.pass = !cert;
    b.certificate = cert;
    v.branches.push_back(b);
  } else {
    auto recipes = compile_recipes(family);
    std::vector<BranchAssignment> assignments =
        branch ? std::vector<BranchAssignment>{*branch} : branch_assignments(recipes.slots);
    for (const auto& a : assignments) {
      BranchOutcome b;
      b.branches = a;
      try {
        RecipeEvaluator er(family.grid, r, a), es(family.grid, s, a), em(family.grid, mid, a);
        auto cert = power_relation_residual(er.eval(recipes.phi, order), es.eval(recipes.phi, order),
                                            em.eval(recipes.phi, order));
        b.checks.push_back(from_certificate("power-relation", cert, order, detail));
        b.certificate = cert;
        b.pass = !cert;
      } catch (const NotDivisible& e) {
        MismatchCertificate cert{e.monomial(), 0, e.coefficient(), "exact monomial division"};
        b.checks.push_back(from_certificate("power-relation", cert, order, e.what()));
        b.certificate = cert;
      } catch (const std::domain_error& e) {
        b.checks.push_back({"power-relation", CheckStatus::Fail, 0, std::nullopt, e.what()});
      }
      v.branches.push_back(b);
    }
  }
  std::size_t chosen = 0;
  for (std::size_t k = 0; k < v.branches.size(); ++k)
    if (v.branches[k].pass) {
      chosen = k;
      v.pass = true;
      break;
    }
  v.branch = v.branches[chosen].branches;
  v.checks = v.branches[chosen].checks;
  v.certificate = v.branches[chosen].certificate;
  return v;
}

ExtractResult extract_fg(const FamilySpec& family, const Rational& r1, const Rational& r2, long order,
                         const std::vector<Rational>& extra) {
  if (r1 == r2) throw std::invalid_argument("extract_fg needs two distinct values of r");
  ExtractResult out;
  out.samples = {r1, r2};
  for (const auto& q : extra)
    if (std::find(out.samples.begin(), out.samples.end(), q) == out.samples.end()) out.samples.push_back(q);
  std::vector<PuiseuxSeries> phi;
  for (const auto& q : out.samples) phi.push_back(basis_combination(family, q, order));

  auto fg = [&](std::size_t a, std::size_t b) {
    Rational e = 1 / (out.samples[a] - out.samples[b]);
    PuiseuxSeries f = pow_rational(mul(phi[a], invert(phi[b])), e);
    PuiseuxSeries g = mul(phi[a], pow_rational(f, -out.samples[a]));
    return std::make_pair(f, g);
  };
  std::tie(out.f, out.g) = fg(0, 1);

  out.independent = true;
  out.power_relation = true;
  for (std::size_t a = 0; a < out.samples.size(); ++a) {
    for (std::size_t b = a + 1; b < out.samples.size(); ++b) {
      if (a != 0 || b != 1) {
        auto [f, g] = fg(a, b);
        auto cert = first_difference(out.f, f);
        if (!cert) cert = first_difference(out.g, g);
        if (cert && out.independent) {
          cert->context = "f, g from r = " + to_string(out.samples[a]) + ", " + to_string(out.samples[b]);
          out.independent = false;
          out.independence_certificate = cert;
        }
      }
      PuiseuxSeries rhs = mul(pow_rational(out.f, out.samples[a] + out.samples[b]), mul(out.g, out.g));
      auto cert = first_difference(rhs, mul(phi[a], phi[b]));
      if (cert && out.power_relation) {
        cert->context = "power relation at r = " + to_string(out.samples[a]) + ", " + to_string(out.samples[b]);
        out.power_relation = false;
        out.power_certificate = cert;
      }
    }
  }
  return out;
}

CensusReport rank_census(const FamilySpec& family, const Rational& r) {
  CensusReport rep;
  rep.family = family.display_name();
  Triangulation t = family.triangulation();
  rep.volume = simplex_volume(family.config, t);
  for (const auto& s : t.simplices) {
    long c = static_cast<long>(gamma_candidates(family.config, family.beta_at(r), s).size());
    rep.gamma_counts.emplace_back(simplex_label(s), c);
    rep.gamma_total += c;
  }
  rep.horn_rank = family.horn_rank ? *family.horn_rank : rep.volume + static_cast<long>(family.extras.size());
  rep.normality_bound = 3;
  rep.normal_up_to_bound = normality_probe(family.config, rep.normality_bound).normal_up_to_bound;
  if (!family.extras.empty()) {
    auto recipes = compile_recipes(family);
    auto ops = family.horn_operators();
    DehomFrame frame = frame_for(family, r);
    for (std::size_t k = 0; k < recipes.extras.size(); ++k) {
      ExtraSolutionReport e;
      e.label = "extra " + std::to_string(k + 1);
      PuiseuxSeries s = eval_recipe(recipes.extras[k], r, family.default_order, family.grid);
      e.annihilated = true;
      for (const auto& op : ops) e.annihilated = e.annihilated && annihilation_check(op, s, r).annihilated;
      // The lattice rows need not generate the toric ideal, so pairwise sums
      // and differences are tried as well.
      HomogenizedSeries hs = homogenize(s, family.lattice, frame);
      const auto& B = family.lattice.B;
      std::vector<IntVector> probes(B.begin(), B.end());
      for (std::size_t a = 0; a < B.size(); ++a)
        for (std::size_t b = a + 1; b < B.size(); ++b) {
          IntVector sum(B[a].size()), diff(B[a].size());
          for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] = B[a][i] + B[b][i];
            diff[i] = B[a][i] - B[b][i];
          }
          probes.push_back(sum);
          probes.push_back(diff);
        }
      for (const auto& l : probes)
        e.structure_nonzero = e.structure_nonzero || !structure_residual(hs, l).is_zero();
      rep.extras.push_back(e);
    }
  }
  return rep;
}

std::vector<Verdict> verify_all(const std::vector<VerifyJob>& jobs, unsigned threads) {
  std::vector<Verdict> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) {
      try {
        results[k] = verify_family(jobs[k].family, jobs[k].r, jobs[k].options);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace ahg

namespace ahg {

std::vector<SymbolicTerm> symbolic_head(const FamilySpec& family, long max_weight, const BranchAssignment& branch) {
  auto recipes = compile_recipes(family);
  std::size_t npts = static_cast<std::size_t>(max_weight) + 2;
  std::vector<Rational> rs;
  for (std::size_t j = 1; j <= npts; ++j) rs.emplace_back(static_cast<long>(j), static_cast<long>(2 * j + 1));
  std::vector<PuiseuxSeries> values;
  for (const auto& r : rs) values.push_back(eval_recipe(recipes.phi, r, max_weight + 1, family.grid, branch));

  std::set<std::vector<Rational>> keys;
  for (const auto& v : values)
    for (const auto& [e, c] : v.terms())
      if (v.weight(e) <= max_weight) keys.insert(v.absolute_exponent(e));

  auto value_at = [&](std::size_t k, const std::vector<Rational>& key) {
    auto c = known_coeff(values[k], key);
    return c ? *c : GaussianRational(0);
  };
  std::vector<std::vector<Rational>> ordered(keys.begin(), keys.end());
  // Total degree ascending; within a degree the first variable's power descends.
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    Rational sa = 0, sb = 0;
    for (const auto& q : a) sa += q;
    for (const auto& q : b) sb += q;
    if (sa != sb) return sa < sb;
    return a > b;
  });

  std::vector<SymbolicTerm> out;
  Poly rvar = Poly::variable(1, 0);
  for (const auto& key : ordered) {
    Poly p(1);
    for (std::size_t k = 0; k + 1 < npts; ++k) {
      Poly basis = Poly::constant(1, value_at(k, key));
      for (std::size_t j = 0; j + 1 < npts; ++j) {
        if (j == k) continue;
        GaussianRational inv = GaussianRational(rs[k] - rs[j]).inverse();
        basis = basis * (rvar - Poly::constant(1, GaussianRational(rs[j]))).scaled(inv);
      }
      p += basis;
    }
    if (p.eval({GaussianRational(rs.back())}) != value_at(npts - 1, key))
      throw std::domain_error("coefficient at " + format_exponent(key, family.variables) +
                              " is not a polynomial in r of degree <= " + std::to_string(max_weight));
    if (!p.is_zero()) out.push_back({key, p});
  }
  return out;
}

}  // namespace ahg
