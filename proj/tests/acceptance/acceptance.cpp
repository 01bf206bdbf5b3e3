// End-to-end acceptance run: one PASS/FAIL line per criterion. Exits nonzero
// when any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "../configs.hpp"
#include "../test_util.hpp"
#include "ahg/analysis.hpp"
#include "ahg/gammaseries.hpp"
#include "ahg/report.hpp"

using namespace ahg;
using namespace ahg::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects the reasons a criterion failed; an empty list means pass.
struct Report {
  std::vector<std::string> problems;
  std::string note;
  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

const std::vector<Rational> kSamples{Rational(1, 3), Rational(2, 5), Rational(3, 7)};

std::string rs(const Rational& r) { return to_string(r); }

const CheckResult* find_check(const Verdict& v, const std::string& name) {
  for (const auto& c : v.checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool check_passed(const Verdict& v, const std::string& name, long order) {
  const CheckResult* c = find_check(v, name);
  return c && c->status == CheckStatus::Pass && c->verified_order >= order;
}

std::vector<GaussianRational> parse_all(const std::vector<std::string>& v) {
  std::vector<GaussianRational> out;
  for (const auto& s : v) out.push_back(GaussianRational::parse(s));
  return out;
}

PuiseuxSeries eval_named(const FamilySpec& fam, const std::string& name, const Rational& r, long order,
                         const BranchAssignment& b) {
  auto recipes = compile_recipes(fam);
  return eval_recipe(name == "phi" ? recipes.phi : recipes.named.at(name), r, order, fam.grid, b);
}

std::vector<PuiseuxSeries> basis_series(const FamilySpec& fam, const Rational& r, long order) {
  std::vector<PuiseuxSeries> out;
  for (const auto& b : build_basis(fam, r, order, false)) out.push_back(b.series);
  return out;
}

// 2F1(a, b; c | z) coefficients from the defining sum.
Rational gauss_coefficient(const Rational& a, const Rational& b, const Rational& c, long k) {
  return pochhammer(a, k) * pochhammer(b, k) / (pochhammer(c, k) * pochhammer(Rational(1), k));
}

// ---------------------------------------------------------------------------

void gauss_identities(Report& rep) {
  const char* names[] = {"Gauss-1", "Gauss-2", "Gauss-3"};
  double slowest = 0;
  for (int k = 0; k < 3; ++k) {
    auto fam = find_family(names[k]);
    for (const auto& r : kSamples) {
      auto t0 = Clock::now();
      VerifyOptions o;
      o.order = 24;
      Verdict v = verify_family(fam, r, o);
      double dt = seconds_since(t0);
      slowest = std::max(slowest, dt);
      rep.require(v.pass, std::string(names[k]) + " fails at r=" + rs(r));
      rep.require(check_passed(v, "basis-identity", 24), std::string(names[k]) + " basis identity below order 24");
      rep.require(dt < 1.0, std::string(names[k]) + " took over 1 s");
      Rational a = r, b = k == 0 ? Rational(-r) : Rational(r + Rational(1, 2)), c = k == 2 ? Rational(2 * r) : Rational(1, 2);
      auto phi = eval_named(fam, "phi", r, 24, {});
      for (long j = 0; j < 12; ++j)
        rep.require(phi.coeff({static_cast<int>(2 * j)}) == GaussianRational(gauss_coefficient(a, b, c, j)),
                    std::string(names[k]) + " differs from the 2F1 sum at z^" + std::to_string(j));
    }
  }
  std::ostringstream note;
  note << "3 families x 3 r at order 24, slowest " << std::fixed;
  note.precision(3);
  note << slowest << " s";
  rep.note = note.str();
}

void appell_second(Report& rep) {
  auto fam = find_family("F4-2");
  for (const auto& r : kSamples) {
    ExponentGrid g({2, 2});
    PuiseuxSeries base(g, 15);
    base.add_term({0, 0}, -1);
    base.add_term({1, 0}, 1);
    base.add_term({0, 1}, 1);
    // (√x+√y−1)^{−2r} as (base²)^{−r} so the negative constant never needs a branch.
    auto target = pow_rational(mul(base, base), -r);
    auto coeffs = decompose(target, basis_series(fam, r, 15));
    std::vector<GaussianRational> want{1, Rational(2 * r), Rational(2 * r), Rational(2 * r * (2 * r + 1))};
    rep.require(coeffs == want, "decomposition differs at r=" + rs(r));
    VerifyOptions o;
    o.order = 15;
    Verdict v = verify_family(fam, r, o);
    rep.require(check_passed(v, "horn-annihilation", 15), "Horn annihilation below order 15 at r=" + rs(r));
  }
  auto head = symbolic_head(fam, 2, {});
  std::string printed = format_symbolic_head(head, fam.variables);
  rep.require(printed == "1 + 2r√x + 2r√y + (r+2r²)x + (2r+4r²)√(xy) + (r+2r²)y", "head printed as " + printed);
  Poly r = Poly::variable(1, 0), one = Poly::constant(1, 1);
  bool found = false;
  for (const auto& t : head)
    if (t.exponent == std::vector<Rational>{Rational(1, 2), Rational(1, 2)}) {
      found = true;
      rep.require(t.coefficient == r.scaled(2) * (r.scaled(2) + one), "sqrt(xy) coefficient is not 2r(2r+1)");
    }
  rep.require(found, "no sqrt(xy) term in the head");
  rep.note = "head " + printed;
}

void appell_first(Report& rep) {
  auto fam = find_family("F4-1");
  for (const auto& r : kSamples) {
    VerifyOptions o;
    o.order = 16;
    Verdict v = verify_family(fam, r, o);
    rep.require(v.pass, "fails at r=" + rs(r));
    std::vector<GaussianRational> want{1, GaussianRational(0, Rational(2 * r)), GaussianRational(0, Rational(-2 * r)),
                                       Rational(4 * r * r)};
    rep.require(parse_all(v.decomposition) == want, "decomposition differs at r=" + rs(r));
    rep.require(check_passed(v, "defining-relations", 16), "(f-h)^2 = h^2-1 below order 16 at r=" + rs(r));
    rep.require(check_passed(v, "horn-annihilation", 16), "Horn annihilation fails at r=" + rs(r));
    if (r == kSamples[0]) rep.note = "branch " + format_branch(v.branch);
  }
}

void appell_third(Report& rep) {
  auto fam = find_family("F4-3");
  for (const auto& r : kSamples) {
    VerifyOptions o;
    Verdict v = verify_family(fam, r, o);
    rep.require(v.pass, "no branch validates at r=" + rs(r));
    if (!v.pass) continue;
    auto f = eval_named(fam, "f", r, 12, v.branch);  // throws NotDivisible unless y² divides exactly
    rep.require(f.constant_term() == GaussianRational(1), "f(0) != 1");
    auto basis = basis_series(fam, r, 12);
    auto phi = eval_named(fam, "phi", r, 12, v.branch);
    rep.require(equal_to_order(phi, basis[0] + scale(basis[2], GaussianRational(Rational(2 * r)))),
                "Phi != Phi1 + 2r Phi3 at r=" + rs(r));
    auto g = eval_named(fam, "g", r, 12, v.branch);
    rep.require(g.constant_term() == GaussianRational(1), "g(0) != 1");
    if (r == kSamples[0]) rep.note = "branch " + format_branch(v.branch);
  }
}

void lauricella(Report& rep) {
  auto t0 = Clock::now();
  for (std::size_t n : {3, 4}) {
    for (int k = 1; k <= 3; ++k) {
      auto fam = find_family("FC-" + std::to_string(k), n);
      VerifyOptions o;
      o.order = 8;
      Verdict v = verify_family(fam, Rational(2, 5), o);
      std::string tag = "FC-" + std::to_string(k) + " n=" + std::to_string(n);
      rep.require(v.pass, tag + " fails");
      rep.require(check_passed(v, "gkz-structure", 8), tag + " structure residual");
      rep.require(check_passed(v, "gkz-euler", 8), tag + " Euler residual");
    }
  }
  double dt = seconds_since(t0);
  rep.require(dt < 30, "took over 30 s");
  std::ostringstream note;
  note.precision(2);
  note << std::fixed << "n=3,4 x 3 families in " << dt << " s";
  rep.note = note.str();
}

void horn_g3(Report& rep) {
  auto fam = find_family("G3");
  for (const auto& r : kSamples) {
    VerifyOptions o;
    Verdict v = verify_family(fam, r, o);
    rep.require(v.pass, "fails at r=" + rs(r));
    rep.require(check_passed(v, "horn-annihilation", 12), "Horn annihilation at r=" + rs(r));
    rep.require(check_passed(v, "basis-identity", 12), "basis identity at r=" + rs(r));
    auto phi = eval_named(fam, "phi", r, 4, {});
    rep.require(phi.coeff({1, 0}) == GaussianRational(Rational(r - 2)), "x coefficient != r-2 at r=" + rs(r));
    Verdict bad = verify_family(apply_variant(fam, "table4-plus-x"), r, o);
    rep.require(!bad.pass && bad.certificate && bad.certificate->exponent == std::vector<Rational>{1, 0},
                "opposite-sign variant lacks an x certificate at r=" + rs(r));
    if (r == kSamples[0] && bad.certificate) rep.note = "variant certificate " + format_certificate(*bad.certificate, fam.variables);
  }
  // Discriminant of y t^3 + t^2 - t - x from the cubic formula, as polynomials in (x, y, F).
  Poly x = Poly::variable(3, 0), y = Poly::variable(3, 1), one = Poly::constant(3, 1);
  auto k = [](long c) { return Poly::constant(3, GaussianRational(c)); };
  Poly a = y, b = one, c = -one, d = -x;
  Poly disc = k(18) * a * b * c * d - k(4) * b.pow(3) * d + b.pow(2) * c.pow(2) - k(4) * a * c.pow(3) -
              k(27) * a.pow(2) * d.pow(2);
  Poly printed = one + x.scaled(4) + y.scaled(4) + (x * y).scaled(18) - (x * x * y * y).scaled(27);
  rep.require(disc == printed, "cubic formula disagrees with the stored Delta");
  rep.require(discriminant_last(family_curve(fam)) == printed, "curve discriminant != Delta");
  rep.require(definition_poly(fam, "Delta") == printed, "stored Delta differs");
}

void h_families(Report& rep) {
  for (const char* name : {"H4-1", "H4-2", "H5"}) {
    auto fam = find_family(name);
    for (const auto& r : kSamples) {
      VerifyOptions o;
      o.order = 12;
      Verdict v = verify_family(fam, r, o);
      rep.require(v.pass, std::string(name) + " fails at r=" + rs(r));
    }
  }
  auto h5 = find_family("H5");
  Verdict v = verify_family(h5, Rational(1, 3), VerifyOptions{});
  auto f = eval_named(h5, "f", Rational(1, 3), 12, v.branch);
  // A double root at the origin: the quartic restricted to x = y = 0 is (F − 1)².
  Poly curve0 = family_curve(h5).substitute({{0, GaussianRational(0)}, {1, GaussianRational(0)}});
  Poly F = Poly::variable(3, 2), one = Poly::constant(3, 1);
  rep.require(curve0 == (F - one).pow(2), "H5 quartic has no double root at the origin");
  rep.require(f.coeff({0, 1}) != GaussianRational(0), "H5 root has no sqrt(y) term");
  auto residual = curve_residual(h5, f);
  rep.require(residual.is_zero() && residual.order() >= 12, "H5 root does not satisfy its quartic to order 12");
  rep.note = "H5 root " + f.truncated(2).to_string(h5.variables);
}

void horn_h4_third(Report& rep) {
  auto fam = find_family("H4-3");
  VerifyOptions o;
  Verdict a = verify_family(fam, Rational(1, 3), o), b = verify_family(fam, Rational(1, 3), o);
  rep.require(verdict_to_json(a).dump() == verdict_to_json(b).dump(), "verdict is not deterministic");
  rep.require(a.branches.size() == 2, "expected one verdict per branch");
  if (a.pass) {
    rep.note = "validates with " + format_branch(a.branch);
    return;
  }
  rep.require(a.certificate.has_value(), "failing verdict without certificate");
  for (const auto& br : a.branches) rep.require(br.certificate.has_value(), "branch without certificate");
  auto x = extract_fg(fam, Rational(1, 3), Rational(2, 5), 10, {Rational(3, 7)});
  rep.require(x.independent, "extracted (f, g) depend on the sample pair");
  rep.require(x.power_relation, "extracted (f, g) violate the power relation");
  rep.note = "no branch validates (" + format_certificate(*a.certificate, fam.variables) +
             "); empirical f = " + x.f.truncated(3).to_string(fam.variables);
}

void census(Report& rep) {
  for (const char* name : {"F4-1", "F4-2", "F4-3", "H4-1", "H4-2", "H4-3", "H5"}) {
    auto c = rank_census(find_family(name));
    rep.require(c.volume == 4 && c.gamma_total == 4, std::string(name) + " volume/count != 4");
  }
  for (std::size_t n : {2, 3, 4}) {
    auto c = rank_census(find_family("FC-2", n));
    rep.require(c.volume == (1L << n) && c.gamma_total == c.volume, "FC n=" + std::to_string(n) + " volume");
  }
  auto g3 = rank_census(find_family("G3"));
  rep.require(g3.volume == 3 && g3.gamma_total == 3, "G3 volume != 3");
  rep.require(g3.horn_rank == 4, "G3 Horn rank != 4");
  rep.require(g3.extras.size() == 1 && g3.extras[0].annihilated, "G3 monomial not annihilated by the Horn operators");
  rep.require(g3.extras.size() == 1 && g3.extras[0].structure_nonzero, "G3 monomial has zero structure residual");
  rep.note = "volumes 4 / 3 / 4,8,16";
}

void properties(Report& rep) {
  long cases = 0;
  std::mt19937_64 rng(20240611);
  for (int t = 0; t < 1000; ++t, ++cases) {
    std::vector<int> ram = t % 2 ? std::vector<int>{1, 2} : std::vector<int>{2, 2};
    auto a = random_series(rng, ram, 6, std::nullopt, 5), b = random_series(rng, ram, 6, std::nullopt, 5),
         c = random_series(rng, ram, 6, std::nullopt, 5);
    rep.require(equal_to_order(mul(mul(a, b), c), mul(a, mul(b, c))), "associativity");
    rep.require(equal_to_order(mul(a, add(b, c)), add(mul(a, b), mul(a, c))), "distributivity");
    rep.require(equal_to_order(mul(a, b), mul(b, a)), "commutativity");
  }
  for (int t = 0; t < 1000; ++t, ++cases) {
    auto a = random_series(rng, {2, 1}, 6, GaussianRational(1), 4), b = random_series(rng, {2, 1}, 6, std::nullopt, 4);
    std::size_t j = t % 2;
    rep.require(equal_to_order(theta(mul(a, b), j), add(mul(theta(a, j), b), mul(a, theta(b, j)))), "theta Leibniz");
    Rational p = random_rational(rng, 7, 5);
    rep.require(equal_to_order(theta(pow_rational(a, p), j),
                               scale(mul(pow_rational(a, p - 1), theta(a, j)), GaussianRational(p))),
                "chain rule");
  }
  std::uniform_int_distribution<long> step(-6, 6);
  for (int t = 0; t < 1000; ++t, ++cases) {
    Rational g;
    do g = random_rational(rng, 12, 5);
    while (is_integer(g));
    long x = step(rng), y = step(rng);
    rep.require(invgamma_ratio(g, x + y) == invgamma_ratio(g, x) * invgamma_ratio(g + x, y), "invgamma telescoping");
  }
  for (int t = 0; t < 1000; ++t, ++cases) {
    Rational r;
    do r = random_rational(rng, 12, 9);
    while (is_integer(2 * r));
    std::vector<Rational> gamma{-r, -r - Rational(1, 2), Rational(-1, 2), Rational(-1, 2), 0, 0};
    DehomFrame frame{gamma, ExponentGrid::uniform(2, 2), {1, 1}};
    auto s = dehomogenize(gamma_series(f4_config(), f4_basis(), gamma, 4), frame, 8);
    for (long m = 0; m < 4; ++m)
      for (long n = 0; m + n < 4; ++n) {
        Rational want = pochhammer(r, m + n) * pochhammer(r + Rational(1, 2), m + n) /
                        (pochhammer(Rational(1, 2), m) * pochhammer(Rational(1, 2), n) *
                         pochhammer(Rational(1), m) * pochhammer(Rational(1), n));
        rep.require(s.coeff({int(2 * m), int(2 * n)}) == GaussianRational(want), "Gamma-series vs double sum");
      }
  }
  rep.note = "5 suites, " + std::to_string(cases) + " randomized cases";
}

void full_matrix(Report& rep) {
  auto t0 = Clock::now();
  std::string cmd = std::string(AHG_CLI_PATH) + " verify-all 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = pclose(pipe);
  double dt = seconds_since(t0);
  rep.require(WIFEXITED(status) && WEXITSTATUS(status) == 0, "verify-all reported unmatched rows");
  rep.require(dt < 300, "verify-all took over 5 minutes");
  auto last = out.rfind("rows match");
  std::string summary = last == std::string::npos ? "no summary" : out.substr(out.rfind('\n', last - 1) + 1);
  while (!summary.empty() && summary.back() == '\n') summary.pop_back();
  std::ostringstream note;
  note.precision(1);
  note << std::fixed << summary << " in " << dt << " s";
  rep.note = note.str();
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    std::function<void(Report&)> run;
  };
  std::vector<Criterion> criteria{
      {"Gauss closed forms equal their 2F1 series", gauss_identities},
      {"Appell F4 second family: decomposition, head, Horn", appell_second},
      {"Appell F4 first family: factored form and relation", appell_first},
      {"Appell F4 third family: branch, divisibility, identity", appell_third},
      {"Lauricella FC n=3,4: structure and Euler residuals", lauricella},
      {"Horn G3: sign of the cubic and discriminant", horn_g3},
      {"Horn H4 first/second and H5: verification", h_families},
      {"Horn H4 third family: verdict and empirical fallback", horn_h4_third},
      {"Rank census", census},
      {"Randomized property suites", properties},
      {"Full verification matrix", full_matrix},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Report rep;
    try {
      criteria[k].run(rep);
    } catch (const std::exception& e) {
      rep.problems.push_back(std::string("exception: ") + e.what());
    }
    bool ok = rep.problems.empty();
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << (k + 1 < 10 ? " " : "") << k + 1 << ". " << criteria[k].title;
    if (ok && !rep.note.empty()) std::cout << "  [" << rep.note << "]";
    if (!ok) {
      std::cout << "  [" << rep.problems.front();
      if (rep.problems.size() > 1) std::cout << "; +" << rep.problems.size() - 1 << " more";
      std::cout << "]";
    }
    std::cout << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
