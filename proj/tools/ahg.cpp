// ahg: command-line front end for verifying hypergeometric closed forms.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ahg/analysis.hpp"
#include "ahg/family.hpp"
#include "ahg/report.hpp"

namespace {

using namespace ahg;

constexpr int kExitPass = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string family;
  std::string r = "1/3";
  std::string s;
  std::optional<long> order;
  std::string variant;
  std::string branch = "auto";
  std::string format = "text";
  std::string family_file;
  std::size_t n = 2;
  std::string what = "phi";
  std::optional<long> symbolic;
  std::string route = "closed";
  std::string extra;
};

Rational rational_arg(const std::string& text, const std::string& flag) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::vector<Rational> rational_list(const std::string& text, const std::string& flag) {
  std::vector<Rational> out;
  if (text.empty()) return out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(rational_arg(item, flag));
  return out;
}

Rational nonresonant(const Rational& r, const std::string& flag) {
  try {
    require_nonresonant(r, flag.rfind("--", 0) == 0 ? flag.substr(2) : flag);
  } catch (const ResonantParameter& e) {
    throw UsageError(e.what());
  }
  return r;
}

std::vector<FamilySpec> file_families(const Options& o) {
  try {
    auto fams = load_family_file(o.family_file);
    for (const auto& f : fams) validate_family(f);
    return fams;
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--family-file: ") + e.what());
  }
}

FamilySpec resolve_family(const Options& o) {
  if (o.family.empty()) throw UsageError("--family is required");
  try {
    FamilySpec fam;
    if (!o.family_file.empty()) {
      auto fams = file_families(o);
      std::string base = o.family, variant;
      if (auto slash = base.find('/'); slash != std::string::npos) {
        variant = base.substr(slash + 1);
        base = base.substr(0, slash);
      }
      const FamilySpec* hit = nullptr;
      std::string known;
      for (const auto& f : fams) {
        if (f.name == base) hit = &f;
        known += (known.empty() ? "" : ", ") + f.name;
      }
      if (!hit) throw UsageError("unknown family '" + o.family + "' in " + o.family_file + " (available: " + known + ")");
      fam = variant.empty() ? *hit : apply_variant(*hit, variant);
    } else {
      fam = find_family(o.family, o.n);
    }
    if (!o.variant.empty()) fam = apply_variant(fam, o.variant);
    return fam;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

long env_order() {
  const char* env = std::getenv("AHG_ORDER");
  if (!env || !*env) return 0;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v <= 0) throw UsageError(std::string("AHG_ORDER must be a positive integer, got '") + env + "'");
  return v;
}

long resolve_order(const Options& o, const FamilySpec& fam) {
  if (o.order) {
    if (*o.order <= 0) throw UsageError("--order must be positive");
    return *o.order;
  }
  if (long v = env_order()) return v;
  return fam.default_order;
}

std::optional<BranchAssignment> resolve_branch(const Options& o, const FamilySpec& fam) {
  if (o.branch == "auto") return std::nullopt;
  auto slots = compile_recipes(fam).slots;
  BranchAssignment b;
  for (const auto& s : slots) b[s] = 1;
  std::stringstream in(o.branch);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--branch: expected slot=+1 or slot=-1, got '" + item + "'");
    std::string slot = item.substr(0, eq), sign = item.substr(eq + 1);
    if (!b.count(slot)) {
      std::string known;
      for (const auto& s : slots) known += (known.empty() ? "" : ", ") + s;
      throw UsageError("--branch: family " + fam.display_name() + " has no slot '" + slot + "' (slots: " +
                       (known.empty() ? "none" : known) + ")");
    }
    if (sign == "+1" || sign == "1" || sign == "+") b[slot] = 1;
    else if (sign == "-1" || sign == "-") b[slot] = -1;
    else throw UsageError("--branch: sign for '" + slot + "' must be +1 or -1");
  }
  return b;
}

// Explicit assignment, or the one a verification run settles on.
BranchAssignment effective_branch(const Options& o, const FamilySpec& fam, const Rational& r, long order) {
  if (auto b = resolve_branch(o, fam)) return *b;
  VerifyOptions vo;
  vo.order = order;
  return verify_family(fam, r, vo).branch;
}

bool json_mode(const Options& o) { return o.format == "json"; }

void emit(const Options& o, const Json& j, const std::string& text) {
  if (json_mode(o)) std::cout << j.dump(2) << "\n";
  else std::cout << text;
}

// ---------------------------------------------------------------- expand

int cmd_expand(const Options& o) {
  FamilySpec fam = resolve_family(o);
  long order = resolve_order(o, fam);
  Rational r = nonresonant(rational_arg(o.r, "--r"), "--r");
  auto names = fam.variables;

  if (o.symbolic) {
    if (o.what != "phi") throw UsageError("--symbolic applies to --what phi only");
    auto branch = effective_branch(o, fam, Rational(1, 3), order);
    auto head = symbolic_head(fam, *o.symbolic, branch);
    Json terms = Json::array();
    for (const auto& t : head) {
      Json e = Json::array();
      for (const auto& q : t.exponent) e.push_back(to_string(q));
      terms.push_back(Json{{"monomial", format_exponent(t.exponent, names)}, {"exponent", e},
                           {"coefficient", t.coefficient.to_string({"r"})}});
    }
    Json j{{"family", fam.display_name()}, {"branch", format_branch(branch)}, {"weight", *o.symbolic},
           {"head", format_symbolic_head(head, names)}, {"terms", terms}};
    emit(o, j, "Phi(r) = " + format_symbolic_head(head, names) + " + ...\n");
    return kExitPass;
  }

  if (o.what == "basis") {
    auto basis = build_basis(fam, r, order);
    Json arr = Json::array();
    std::string text;
    for (const auto& b : basis) {
      arr.push_back(Json{{"label", b.label}, {"extra", b.extra}, {"series", series_to_json(b.series, names)}});
      text += b.label + (b.extra ? " (horn only)" : "") + " = " + b.series.to_string(names) + "\n";
    }
    emit(o, Json{{"family", fam.display_name()}, {"r", to_string(r)}, {"order", order}, {"basis", arr}}, text);
    return kExitPass;
  }

  auto recipes = compile_recipes(fam);
  const Recipe* rec = nullptr;
  if (o.what == "phi") {
    rec = &recipes.phi;
  } else if (auto it = recipes.named.find(o.what); it != recipes.named.end()) {
    rec = &it->second;
  } else {
    std::string known = "phi, basis";
    for (const auto& [k, v] : recipes.named) known += ", " + k;
    throw UsageError("--what: family " + fam.display_name() + " has no expression '" + o.what + "' (available: " +
                     known + ")");
  }
  auto branch = effective_branch(o, fam, r, order);
  PuiseuxSeries s = eval_recipe(*rec, r, order, fam.grid, branch);
  Json j{{"family", fam.display_name()}, {"what", o.what}, {"r", to_string(r)}, {"branch", format_branch(branch)},
         {"series", series_to_json(s, names)}};
  emit(o, j, o.what + " = " + s.to_string(names) + "\n");
  return kExitPass;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const Options& o) {
  FamilySpec fam = resolve_family(o);
  long order = resolve_order(o, fam);
  auto rs = rational_list(o.r, "--r");
  if (rs.empty()) throw UsageError("--r: no values given");
  for (const auto& r : rs) nonresonant(r, "--r");
  VerifyOptions vo;
  vo.order = order;
  vo.branch = resolve_branch(o, fam);

  std::vector<Verdict> verdicts;
  for (const auto& r : rs) verdicts.push_back(verify_family(fam, r, vo));
  bool all = true;
  Json arr = Json::array();
  std::string text;
  for (std::size_t k = 0; k < verdicts.size(); ++k) {
    all = all && verdicts[k].pass;
    arr.push_back(verdict_to_json(verdicts[k]));
    text += (k ? "\n" : "") + render_verdict(verdicts[k]);
  }
  emit(o, verdicts.size() == 1 ? arr[0] : arr, text);
  return all ? kExitPass : kExitMismatch;
}

// ---------------------------------------------------------------- verify-all

struct MatrixRow {
  FamilySpec family;
  std::size_t n;
};

struct Fallback {
  bool ok = false;
  std::string detail;
};

int cmd_verify_all(const Options& o) {
  std::vector<MatrixRow> rows;
  if (!o.family_file.empty()) {
    for (const auto& f : file_families(o)) {
      rows.push_back({f, f.arity()});
      for (const auto& v : f.variants) rows.push_back({apply_variant(f, v.name), f.arity()});
    }
  } else {
    for (const auto& f : registry()) {
      rows.push_back({f, 2});
      for (const auto& v : f.variants) rows.push_back({apply_variant(f, v.name), 2});
    }
    for (std::size_t n : {3, 4})
      for (const auto& f : registry_with_fc(n))
        if (f.name.rfind("FC-", 0) == 0) rows.push_back({f, n});
  }
  long override_order = o.order ? *o.order : env_order();
  if (o.order && *o.order <= 0) throw UsageError("--order must be positive");

  auto rs = default_r_values();
  if (o.r != "1/3") {
    rs = rational_list(o.r, "--r");
    for (const auto& r : rs) nonresonant(r, "--r");
  }

  std::vector<VerifyJob> jobs;
  for (const auto& row : rows)
    for (const auto& r : rs) {
      VerifyOptions vo;
      vo.order = override_order ? override_order : row.family.default_order;
      jobs.push_back({row.family, r, vo});
    }
  auto verdicts = verify_all(jobs);

  // Open rows get the empirical (f, g) fallback once per family.
  std::map<std::string, Fallback> fallbacks;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const auto& fam = jobs[k].family;
    if (fam.expect != Expectation::Open || verdicts[k].pass || fallbacks.count(fam.display_name())) continue;
    std::vector<Rational> extra(rs.begin() + std::min<std::size_t>(2, rs.size()), rs.end());
    Fallback fb;
    if (rs.size() < 2) {
      fb.detail = "needs two r values";
    } else {
      auto x = extract_fg(fam, rs[0], rs[1], 10, extra);
      fb.ok = x.independent && x.power_relation;
      fb.detail = std::string("extract: independence ") + (x.independent ? "pass" : "fail") + ", power relation " +
                  (x.power_relation ? "pass" : "fail");
    }
    fallbacks[fam.display_name()] = fb;
  }

  Json jrows = Json::array();
  std::vector<std::vector<std::string>> table{{"family", "n", "r", "order", "expect", "verdict", "branch", "match", "title"}};
  std::vector<std::string> notes;
  std::size_t matching = 0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const auto& fam = jobs[k].family;
    const auto& v = verdicts[k];
    bool match = false;
    std::optional<Fallback> fb;
    switch (fam.expect) {
      case Expectation::Pass: match = v.pass; break;
      case Expectation::Fail: match = !v.pass && v.certificate.has_value(); break;
      case Expectation::Open:
        if (v.pass) {
          match = true;
        } else {
          fb = fallbacks[fam.display_name()];
          match = v.certificate.has_value() && fb->ok;
        }
        break;
    }
    matching += match;
    table.push_back({fam.display_name(), std::to_string(fam.arity()), to_string(v.r), std::to_string(v.order),
                     to_string(fam.expect), v.pass ? "pass" : "fail", v.pass ? format_branch(v.branch) : "-",
                     match ? "yes" : "NO", fam.title});
    std::string note;
    if (v.certificate) note = "certificate " + format_certificate(*v.certificate, fam.variables);
    if (fb) note += "; " + fb->detail;
    if (!note.empty()) notes.push_back(fam.display_name() + " r=" + to_string(v.r) + ": " + note);
    Json row{{"family", fam.display_name()},
             {"title", fam.title},
             {"n", fam.arity()},
             {"r", to_string(v.r)},
             {"order", v.order},
             {"expect", to_string(fam.expect)},
             {"pass", v.pass},
             {"branch", v.pass ? Json(format_branch(v.branch)) : Json(nullptr)},
             {"match", match},
             {"certificate", v.certificate ? certificate_to_json(*v.certificate, fam.variables) : Json(nullptr)}};
    if (fb) row["fallback"] = Json{{"ok", fb->ok}, {"detail", fb->detail}};
    jrows.push_back(row);
  }
  bool all = matching == jobs.size();

  std::vector<std::size_t> width(table[0].size(), 0);
  for (const auto& row : table)
    for (std::size_t c = 0; c + 1 < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream out;
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size()) out << std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << "\n";
  }
  if (!notes.empty()) {
    out << "\n";
    for (const auto& n : notes) out << n << "\n";
  }
  out << "\n" << matching << "/" << jobs.size() << " rows match their expectation\n";
  emit(o, Json{{"rows", jrows}, {"matching", matching}, {"total", jobs.size()}, {"all_match", all}}, out.str());
  return all ? kExitPass : kExitMismatch;
}

// ---------------------------------------------------------------- decompose

int cmd_decompose(const Options& o) {
  FamilySpec fam = resolve_family(o);
  long order = resolve_order(o, fam);
  Rational r = nonresonant(rational_arg(o.r, "--r"), "--r");
  auto branch = effective_branch(o, fam, r, order);
  auto recipes = compile_recipes(fam);
  PuiseuxSeries target = eval_recipe(recipes.phi, r, order, fam.grid, branch);
  auto elems = build_basis(fam, r, order, false);
  std::vector<PuiseuxSeries> series;
  for (const auto& e : elems) series.push_back(e.series);

  Json j{{"family", fam.display_name()}, {"r", to_string(r)}, {"order", order}, {"branch", format_branch(branch)}};
  std::ostringstream out;
  out << "family         " << fam.display_name() << "\n"
      << "r              " << to_string(r) << "\n"
      << "order          " << order << "\n"
      << "branch         " << format_branch(branch) << "\n";
  try {
    auto coeffs = decompose(target, series);
    bool declared = !fam.coefficients.empty();
    auto expected = declared ? family_coefficients(fam, r, coeffs.size()) : std::vector<GaussianRational>{};
    bool match = true;
    Json arr = Json::array();
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      Json e{{"label", elems[k].label}, {"coefficient", coeffs[k].to_string()}};
      out << "  " << elems[k].label << "  " << coeffs[k].to_string();
      if (declared) {
        bool ok = coeffs[k] == expected[k];
        match = match && ok;
        e["declared"] = expected[k].to_string();
        out << "  (declared " << fam.coefficient_text[k] << " = " << expected[k].to_string() << (ok ? ")" : ", MISMATCH)");
      }
      out << "\n";
      arr.push_back(e);
    }
    j["coefficients"] = arr;
    j["matches_declared"] = declared ? Json(match) : Json(nullptr);
    emit(o, j, out.str());
    return match ? kExitPass : kExitMismatch;
  } catch (const ResidualNonzero& e) {
    j["error"] = e.what();
    j["certificate"] = certificate_to_json(e.certificate(), fam.variables);
    out << "no decomposition: " << e.what() << "\ncertificate    " << format_certificate(e.certificate(), fam.variables)
        << "\n";
  } catch (const RankDeficient& e) {
    j["error"] = e.what();
    out << "no decomposition: " << e.what() << "\n";
  }
  emit(o, j, out.str());
  return kExitMismatch;
}

// ---------------------------------------------------------------- relation

int cmd_relation(const Options& o) {
  FamilySpec fam = resolve_family(o);
  long order = resolve_order(o, fam);
  Rational r = rational_arg(o.r, "--r");
  Rational s = rational_arg(o.s.empty() ? "1/5" : o.s, "--s");
  PowerRoute route;
  if (o.route == "closed") {
    route = PowerRoute::ClosedForm;
  } else if (o.route == "basis") {
    route = PowerRoute::Basis;
    nonresonant(r, "--r");
    nonresonant(s, "--s");
    nonresonant((r + s) / 2, "(r+s)/2");
  } else {
    throw UsageError("--route must be 'closed' or 'basis'");
  }
  Verdict v = power_relation_check(fam, r, s, order, route, resolve_branch(o, fam));
  Json j = verdict_to_json(v);
  j["s"] = to_string(s);
  j["route"] = o.route;
  emit(o, j, "s              " + to_string(s) + "\nroute          " + o.route + "\n" + render_verdict(v));
  return v.pass ? kExitPass : kExitMismatch;
}

// ---------------------------------------------------------------- extract

int cmd_extract(const Options& o) {
  FamilySpec fam = resolve_family(o);
  long order = resolve_order(o, fam);
  Rational r1 = nonresonant(rational_arg(o.r, "--r"), "--r");
  Rational r2 = nonresonant(rational_arg(o.s.empty() ? "2/5" : o.s, "--s"), "--s");
  if (r1 == r2) throw UsageError("--r and --s must differ");
  auto extra = rational_list(o.extra.empty() ? "3/7" : o.extra, "--extra");
  for (const auto& e : extra) nonresonant(e, "--extra");

  auto x = extract_fg(fam, r1, r2, order, extra);
  bool ok = x.independent && x.power_relation;
  Json j{{"family", fam.display_name()}, {"order", order}};
  Json body = extract_to_json(x, fam.variables);
  for (const auto& [k, v] : body.items()) j[k] = v;
  std::string text = "family         " + fam.display_name() + "\norder          " + std::to_string(order) + "\n" +
                     render_extract(x, fam.variables, order);
  if (!fam.curve.empty()) {
    PuiseuxSeries res = curve_residual(fam, x.f);
    auto cert = first_difference(PuiseuxSeries(res.grid(), res.order()), res);
    ok = ok && !cert;
    j["curve"] = Json{{"pass", !cert}, {"certificate", cert ? certificate_to_json(*cert, fam.variables) : Json(nullptr)}};
    text += std::string("curve          ") + (cert ? "fail  " + format_certificate(*cert, fam.variables) : "pass") + "\n";
  }
  emit(o, j, text);
  return ok ? kExitPass : kExitMismatch;
}

// ---------------------------------------------------------------- census

int cmd_census(const Options& o) {
  FamilySpec fam = resolve_family(o);
  Rational r = nonresonant(rational_arg(o.r, "--r"), "--r");
  auto c = rank_census(fam, r);
  emit(o, census_to_json(c), render_census(c));
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verifier for algebraic closed forms of hypergeometric families"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool family_required = true) {
    auto* fam = sub->add_option("--family", o.family, "Family name, e.g. F4-2, G3, H4-1, FC-3 or NAME/VARIANT");
    if (family_required) fam->required();
    sub->add_option("--family-file", o.family_file, "Load families from a text file instead of the registry");
    sub->add_option("--variant", o.variant, "Apply a named variant of the family");
    sub->add_option("--order", o.order, "Truncation order in grid units (default: $AHG_ORDER or the family default)");
    sub->add_option("--n", o.n, "Number of variables for FC families")->check(CLI::Range(2, 8));
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };
  auto branch = [&](CLI::App* sub) {
    sub->add_option("--branch", o.branch, "auto, or an explicit list slot=+1,slot=-1");
  };

  auto* expand = app.add_subcommand("expand", "Print a truncated expansion");
  common(expand);
  branch(expand);
  expand->add_option("--r", o.r, "Value of r");
  expand->add_option("--what", o.what, "phi, basis, or a named definition such as f or g");
  expand->add_option("--symbolic", o.symbolic, "Print the head of phi up to this weight with coefficients in r");

  auto* verify = app.add_subcommand("verify", "Verify a family's closed form");
  common(verify);
  branch(verify);
  verify->add_option("--r", o.r, "Value of r, or a comma-separated list");

  auto* all = app.add_subcommand("verify-all", "Run the full verification matrix");
  common(all, false);
  all->add_option("--r", o.r, "Comma-separated r values (default 1/3,2/5,3/7)");

  auto* dec = app.add_subcommand("decompose", "Decompose the closed form in the local basis");
  common(dec);
  branch(dec);
  dec->add_option("--r", o.r, "Value of r");

  auto* rel = app.add_subcommand("relation", "Check Phi(r)Phi(s) = Phi((r+s)/2)^2");
  common(rel);
  branch(rel);
  rel->add_option("--r", o.r, "Value of r");
  rel->add_option("--s", o.s, "Value of s (default 1/5)");
  rel->add_option("--route", o.route, "closed or basis")->check(CLI::IsMember({"closed", "basis"}));

  auto* ext = app.add_subcommand("extract", "Recover f and g from the basis combination");
  common(ext);
  ext->add_option("--r", o.r, "First sample r1");
  ext->add_option("--s", o.s, "Second sample r2 (default 2/5)");
  ext->add_option("--extra", o.extra, "Further samples for the consistency checks (default 3/7)");

  auto* census = app.add_subcommand("census", "Report volumes, basis counts and Horn rank");
  common(census);
  census->add_option("--r", o.r, "Value of r used for the extra-solution checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*expand) return cmd_expand(o);
    if (*verify) return cmd_verify(o);
    if (*all) return cmd_verify_all(o);
    if (*dec) return cmd_decompose(o);
    if (*rel) return cmd_relation(o);
    if (*ext) return cmd_extract(o);
    if (*census) return cmd_census(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  }
  return kExitUsage;
}
