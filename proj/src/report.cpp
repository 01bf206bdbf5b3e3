#include "ahg/report.hpp"

#include <iomanip>
#include <sstream>

namespace ahg {

namespace {

std::string superscript(long k) {
  static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
  std::string out;
  for (char c : std::to_string(k)) out += digits[c - '0'];
  return out;
}

bool single_letters(const std::vector<std::string>& names) {
  for (const auto& n : names)
    if (n.size() != 1) return false;
  return true;
}

std::string gaussian_factor(const GaussianRational& c) {
  if (c.is_real()) return to_string(c.re());
  if (sgn(c.re()) == 0) {
    if (c.im() == 1) return "i";
    if (c.im() == -1) return "-i";
    return to_string(c.im()) + "i";
  }
  std::string im = c.im() == 1 ? "i" : c.im() == -1 ? "-i" : to_string(c.im()) + "i";
  return "(" + to_string(c.re()) + (sgn(c.im()) > 0 ? "+" : "") + im + ")";
}

std::string exponents_json_string(const Rational& q) { return to_string(q); }

}  // namespace

std::string format_monomial(const std::vector<Rational>& e, const std::vector<std::string>& names) {
  std::vector<std::size_t> nz;
  for (std::size_t j = 0; j < e.size(); ++j)
    if (sgn(e[j]) != 0) nz.push_back(j);
  if (nz.empty()) return "";
  std::string sep = single_letters(names) ? "" : "·";
  bool all_half = nz.size() > 1;
  for (auto j : nz) all_half = all_half && e[j] == Rational(1, 2);
  if (all_half) {
    std::string inner;
    for (std::size_t k = 0; k < nz.size(); ++k) inner += (k ? sep : "") + names[nz[k]];
    return "√(" + inner + ")";
  }
  std::string out;
  for (std::size_t k = 0; k < nz.size(); ++k) {
    const Rational& q = e[nz[k]];
    const std::string& n = names[nz[k]];
    std::string f;
    if (q == 1) f = n;
    else if (q == Rational(1, 2)) f = "√" + n;
    else if (is_integer(q) && sgn(q) > 0) f = n + superscript(q.get_num().get_si());
    else f = n + "^(" + to_string(q) + ")";
    out += (k ? sep : "") + f;
  }
  return out;
}

std::string format_r_poly(const Poly& p, bool wrap) {
  if (p.is_zero()) return "0";
  std::vector<std::string> parts;
  for (const auto& [m, c] : p.terms()) {
    int k = m.empty() ? 0 : m[0];
    std::string coeff;
    if (k > 0 && c.is_one()) coeff = "";
    else if (k > 0 && c == GaussianRational(-1)) coeff = "-";
    else coeff = gaussian_factor(c);
    std::string rp = k == 0 ? "" : k == 1 ? "r" : "r" + superscript(k);
    parts.push_back(coeff + rp);
  }
  std::string out = parts[0];
  for (std::size_t k = 1; k < parts.size(); ++k) out += (parts[k][0] == '-' ? "" : "+") + parts[k];
  if (wrap && parts.size() > 1) return "(" + out + ")";
  return out;
}

std::string format_symbolic_head(const std::vector<SymbolicTerm>& terms, const std::vector<std::string>& names) {
  if (terms.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    std::string mono = format_monomial(terms[k].exponent, names);
    std::string coeff;
    const Poly& p = terms[k].coefficient;
    if (!mono.empty() && p.is_constant() && p.constant_term().is_one()) coeff = "";
    else if (!mono.empty() && p.is_constant() && p.constant_term() == GaussianRational(-1)) coeff = "-";
    else coeff = format_r_poly(p, !mono.empty());
    std::string term = coeff + mono;
    if (k == 0) out = term;
    else if (term[0] == '-') out += " - " + term.substr(1);
    else out += " + " + term;
  }
  return out;
}

std::string format_branch(const BranchAssignment& b) {
  if (b.empty()) return "(no slots)";
  std::string out;
  for (const auto& [slot, sign] : b) out += (out.empty() ? "" : ",") + slot + "=" + (sign > 0 ? "+1" : "-1");
  return out;
}

std::string format_certificate(const MismatchCertificate& c, const std::vector<std::string>& names) {
  return "at " + format_exponent(c.exponent, names) + ": expected " + c.expected.to_string() + ", got " +
         c.actual.to_string() + (c.context.empty() ? "" : " (" + c.context + ")");
}

Json certificate_to_json(const MismatchCertificate& c, const std::vector<std::string>& names) {
  Json e = Json::array();
  for (const auto& q : c.exponent) e.push_back(exponents_json_string(q));
  return Json{{"monomial", format_exponent(c.exponent, names)},
              {"exponent", e},
              {"expected", c.expected.to_string()},
              {"actual", c.actual.to_string()},
              {"context", c.context}};
}

MismatchCertificate certificate_from_json(const Json& j) {
  MismatchCertificate c;
  for (const auto& q : j.at("exponent")) c.exponent.push_back(parse_rational(q.get<std::string>()));
  c.expected = GaussianRational::parse(j.at("expected").get<std::string>());
  c.actual = GaussianRational::parse(j.at("actual").get<std::string>());
  c.context = j.at("context").get<std::string>();
  return c;
}

namespace {

Json branch_json(const BranchAssignment& b) {
  Json j = Json::object();
  for (const auto& [slot, sign] : b) j[slot] = sign;
  return j;
}

BranchAssignment branch_from_json(const Json& j) {
  BranchAssignment b;
  for (const auto& [slot, sign] : j.items()) b[slot] = sign.get<int>();
  return b;
}

Json check_json(const CheckResult& c, const std::vector<std::string>& names) {
  return Json{{"name", c.name},
              {"status", to_string(c.status)},
              {"verified_order", c.verified_order},
              {"detail", c.detail},
              {"certificate", c.certificate ? certificate_to_json(*c.certificate, names) : Json(nullptr)}};
}

CheckStatus status_from(const std::string& s) {
  if (s == "pass") return CheckStatus::Pass;
  if (s == "fail") return CheckStatus::Fail;
  return CheckStatus::Skipped;
}

CheckResult check_from_json(const Json& j) {
  CheckResult c;
  c.name = j.at("name").get<std::string>();
  c.status = status_from(j.at("status").get<std::string>());
  c.verified_order = j.at("verified_order").get<long>();
  c.detail = j.at("detail").get<std::string>();
  if (!j.at("certificate").is_null()) c.certificate = certificate_from_json(j.at("certificate"));
  return c;
}

Expectation expectation_from(const std::string& s) {
  if (s == "fail") return Expectation::Fail;
  if (s == "open") return Expectation::Open;
  return Expectation::Pass;
}

}  // namespace

Json verdict_to_json(const Verdict& v) {
  Json checks = Json::array();
  for (const auto& c : v.checks) checks.push_back(check_json(c, v.variables));
  Json branches = Json::array();
  for (const auto& b : v.branches) {
    Json bc = Json::array();
    for (const auto& c : b.checks) bc.push_back(check_json(c, v.variables));
    branches.push_back(Json{{"branch", branch_json(b.branches)},
                            {"pass", b.pass},
                            {"certificate", b.certificate ? certificate_to_json(*b.certificate, v.variables) : Json(nullptr)},
                            {"checks", bc}});
  }
  return Json{{"family", v.family},
              {"title", v.title},
              {"variables", v.variables},
              {"r", to_string(v.r)},
              {"order", v.order},
              {"pass", v.pass},
              {"expect", to_string(v.expect)},
              {"branch", branch_json(v.branch)},
              {"checks", checks},
              {"certificate", v.certificate ? certificate_to_json(*v.certificate, v.variables) : Json(nullptr)},
              {"decomposition", v.decomposition},
              {"branches", branches}};
}

Verdict verdict_from_json(const Json& j) {
  Verdict v;
  v.family = j.at("family").get<std::string>();
  v.title = j.at("title").get<std::string>();
  v.variables = j.at("variables").get<std::vector<std::string>>();
  v.r = parse_rational(j.at("r").get<std::string>());
  v.order = j.at("order").get<long>();
  v.pass = j.at("pass").get<bool>();
  v.expect = expectation_from(j.at("expect").get<std::string>());
  v.branch = branch_from_json(j.at("branch"));
  for (const auto& c : j.at("checks")) v.checks.push_back(check_from_json(c));
  if (!j.at("certificate").is_null()) v.certificate = certificate_from_json(j.at("certificate"));
  v.decomposition = j.at("decomposition").get<std::vector<std::string>>();
  for (const auto& bj : j.at("branches")) {
    BranchOutcome b;
    b.branches = branch_from_json(bj.at("branch"));
    b.pass = bj.at("pass").get<bool>();
    if (!bj.at("certificate").is_null()) b.certificate = certificate_from_json(bj.at("certificate"));
    for (const auto& c : bj.at("checks")) b.checks.push_back(check_from_json(c));
    v.branches.push_back(b);
  }
  return v;
}

std::string render_verdict(const Verdict& v) {
  std::ostringstream out;
  out << "family         " << v.family << (v.title.empty() ? "" : "  (" + v.title + ")") << "\n";
  out << "r              " << to_string(v.r) << "\n";
  out << "order          " << v.order << "\n";
  out << "verdict        " << (v.pass ? "PASS" : "FAIL") << "\n";
  out << "branch         " << format_branch(v.branch) << (v.pass ? "" : " (first tried)") << "\n";
  for (const auto& c : v.checks) {
    out << "  " << std::left << std::setw(20) << c.name << std::setw(8) << to_string(c.status);
    if (c.status != CheckStatus::Skipped) out << "order " << c.verified_order;
    if (c.certificate) out << "  " << format_certificate(*c.certificate, v.variables);
    else if (c.status != CheckStatus::Pass && !c.detail.empty()) out << "  " << c.detail;
    out << "\n";
  }
  if (v.certificate) out << "certificate    " << format_certificate(*v.certificate, v.variables) << "\n";
  if (!v.decomposition.empty()) {
    out << "decomposition  ";
    for (std::size_t k = 0; k < v.decomposition.size(); ++k) out << (k ? ", " : "") << v.decomposition[k];
    out << "\n";
  }
  if (v.branches.size() > 1) {
    out << "branches\n";
    for (const auto& b : v.branches) {
      out << "  " << std::left << std::setw(20) << format_branch(b.branches) << (b.pass ? "pass" : "fail");
      if (b.certificate) out << "  " << format_certificate(*b.certificate, v.variables);
      out << "\n";
    }
  }
  return out.str();
}

Json series_to_json(const PuiseuxSeries& s, const std::vector<std::string>& names) {
  std::vector<std::pair<long, Exponent>> keys;
  for (const auto& [e, c] : s.terms()) keys.emplace_back(s.weight(e), e);
  std::sort(keys.begin(), keys.end());
  Json terms = Json::array();
  for (const auto& [w, e] : keys) {
    auto abs = s.absolute_exponent(e);
    Json ex = Json::array();
    for (const auto& q : abs) ex.push_back(to_string(q));
    terms.push_back(Json{{"monomial", format_exponent(abs, names)}, {"exponent", ex}, {"coefficient", s.coeff(e).to_string()}});
  }
  Json ram = Json::array();
  for (int k : s.grid().ram) ram.push_back(k);
  return Json{{"grid", ram}, {"order", s.order()}, {"terms", terms}};
}

Json census_to_json(const CensusReport& c) {
  Json counts = Json::array();
  for (const auto& [label, n] : c.gamma_counts) counts.push_back(Json{{"simplex", label}, {"candidates", n}});
  Json extras = Json::array();
  for (const auto& e : c.extras)
    extras.push_back(Json{{"label", e.label}, {"horn_annihilated", e.annihilated}, {"structure_nonzero", e.structure_nonzero}});
  return Json{{"family", c.family},
              {"volume", c.volume},
              {"gamma_counts", counts},
              {"gamma_total", c.gamma_total},
              {"horn_rank", c.horn_rank},
              {"normal_up_to_bound", c.normal_up_to_bound},
              {"normality_bound", c.normality_bound},
              {"extras", extras}};
}

std::string render_census(const CensusReport& c) {
  std::ostringstream out;
  out << "family         " << c.family << "\n";
  out << "volume         " << c.volume << "\n";
  out << "gamma counts  ";
  for (const auto& [label, n] : c.gamma_counts) out << " " << label << ":" << n;
  out << "  (total " << c.gamma_total << ")\n";
  out << "horn rank      " << c.horn_rank << "\n";
  out << "normality      " << (c.normal_up_to_bound ? "no gaps" : "gap found") << " up to degree " << c.normality_bound
      << "\n";
  for (const auto& e : c.extras)
    out << e.label << "        horn " << (e.annihilated ? "annihilated" : "NOT annihilated") << ", gkz structure "
        << (e.structure_nonzero ? "nonzero (not a GKZ solution)" : "zero") << "\n";
  return out.str();
}

Json extract_to_json(const ExtractResult& x, const std::vector<std::string>& names) {
  Json samples = Json::array();
  for (const auto& q : x.samples) samples.push_back(to_string(q));
  return Json{{"samples", samples},
              {"independent", x.independent},
              {"independence_certificate",
               x.independence_certificate ? certificate_to_json(*x.independence_certificate, names) : Json(nullptr)},
              {"power_relation", x.power_relation},
              {"power_certificate", x.power_certificate ? certificate_to_json(*x.power_certificate, names) : Json(nullptr)},
              {"f", series_to_json(x.f, names)},
              {"g", series_to_json(x.g, names)}};
}

std::string render_extract(const ExtractResult& x, const std::vector<std::string>& names, long head_weight) {
  std::ostringstream out;
  out << "samples        ";
  for (std::size_t k = 0; k < x.samples.size(); ++k) out << (k ? ", " : "") << to_string(x.samples[k]);
  out << "\n";
  out << "f              " << x.f.truncated(std::min(x.f.order(), head_weight)).to_string(names) << "\n";
  out << "g              " << x.g.truncated(std::min(x.g.order(), head_weight)).to_string(names) << "\n";
  out << "independence   " << (x.independent ? "pass" : "fail");
  if (x.independence_certificate) out << "  " << format_certificate(*x.independence_certificate, names);
  out << "\n";
  out << "power relation " << (x.power_relation ? "pass" : "fail");
  if (x.power_certificate) out << "  " << format_certificate(*x.power_certificate, names);
  out << "\n";
  return out.str();
}

}  // namespace ahg
