#include "ahg/family.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace ahg {

std::string to_string(Expectation e) {
  switch (e) {
    case Expectation::Pass:
      return "pass";
    case Expectation::Fail:
      return "fail";
    case Expectation::Open:
      return "open";
  }
  return "?";
}

Triangulation FamilySpec::triangulation() const {
  Triangulation t;
  for (const auto& b : basis)
    if (std::find(t.simplices.begin(), t.simplices.end(), b.simplex) == t.simplices.end())
      t.simplices.push_back(b.simplex);
  return t;
}

std::vector<Rational> FamilySpec::beta_at(const Rational& r) const {
  std::vector<Rational> out;
  for (const auto& b : beta) out.push_back(b.at(r));
  return out;
}

std::vector<Rational> FamilySpec::gamma_at(std::size_t k, const Rational& r) const {
  std::vector<Rational> out;
  for (const auto& g : basis.at(k).gamma) out.push_back(g.at(r));
  return out;
}

std::vector<ThetaOperator> FamilySpec::horn_operators() const {
  std::vector<ThetaOperator> ops;
  for (const auto& h : horn) ops.push_back(ThetaOperator::parse(h, variables));
  return ops;
}

const Definition* FamilySpec::find_definition(const std::string& name) const {
  for (const auto& d : definitions)
    if (d.name == name) return &d;
  return nullptr;
}

std::string FamilySpec::display_name() const { return variant.empty() ? name : name + "/" + variant; }

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

/// "name = expr" (optionally prefixed by "let").
std::optional<Definition> as_definition(std::string line) {
  if (line.rfind("let ", 0) == 0) line = trim(line.substr(4));
  auto eq = line.find('=');
  if (eq == std::string::npos) return std::nullopt;
  std::string name = trim(line.substr(0, eq));
  if (!is_identifier(name)) return std::nullopt;
  return Definition{name, trim(line.substr(eq + 1))};
}

Expectation parse_expectation(const std::string& s) {
  if (s == "pass") return Expectation::Pass;
  if (s == "fail") return Expectation::Fail;
  if (s == "open") return Expectation::Open;
  throw FamilyError("expect must be pass, fail or open, got '" + s + "'");
}

long parse_long(const std::string& s) {
  Rational q = parse_rational(s);
  if (!is_integer(q)) throw FamilyError("expected an integer, got '" + s + "'");
  return q.get_num().get_si();
}

IntVector parse_ints(const std::vector<std::string>& ws, std::size_t from = 0) {
  IntVector out;
  for (std::size_t k = from; k < ws.size(); ++k) out.push_back(parse_long(ws[k]));
  return out;
}

void set_definition(std::vector<Definition>& defs, const Definition& d) {
  for (auto& existing : defs)
    if (existing.name == d.name) {
      existing.text = d.text;
      return;
    }
  defs.push_back(d);
}

struct RawBasis {
  std::vector<std::size_t> simplex;
  std::optional<std::vector<std::string>> gamma;
};

class FamilyParser {
 public:
  FamilyParser(const std::string& text, std::string source) : source_(std::move(source)) {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      lines_.push_back(trim(line));
    }
  }

  std::vector<FamilySpec> parse() {
    std::vector<FamilySpec> out;
    for (pos_ = 0; pos_ < lines_.size(); ++pos_) {
      const std::string& line = lines_[pos_];
      if (line.empty()) continue;
      auto ws = words(line);
      if (ws[0] == "family") {
        finish(out);
        if (ws.size() != 2) fail("family takes exactly one name");
        current_.emplace();
        current_->name = ws[1];
        raw_basis_.clear();
        continue;
      }
      if (!current_) fail("expected 'family NAME' before '" + ws[0] + "'");
      try {
        statement(line, ws);
      } catch (const FamilyError&) {
        throw;
      } catch (const std::exception& e) {
        fail(e.what());
      }
    }
    finish(out);
    if (out.empty()) throw FamilyError(source_ + ": no family definitions found");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw FamilyError(source_ + ":" + std::to_string(pos_ + 1) + ": " + what);
  }

  std::string rest(const std::string& line, const std::string& keyword) const {
    return trim(line.substr(keyword.size()));
  }

  IntMatrix matrix_block() {
    IntMatrix m;
    for (++pos_; pos_ < lines_.size(); ++pos_) {
      if (lines_[pos_].empty()) continue;
      if (lines_[pos_] == "end") return m;
      m.push_back(parse_ints(words(lines_[pos_])));
    }
    fail("missing 'end' after matrix block");
  }

  void variant_block(const std::string& name) {
    FamilyVariant v;
    v.name = name;
    for (++pos_; pos_ < lines_.size(); ++pos_) {
      const std::string& line = lines_[pos_];
      if (line.empty()) continue;
      if (line == "end") {
        current_->variants.push_back(std::move(v));
        return;
      }
      auto ws = words(line);
      if (auto d = as_definition(line)) {
        set_definition(v.definitions, *d);
      } else if (ws[0] == "title") {
        v.title = rest(line, "title");
      } else if (ws[0] == "curve") {
        v.curve = rest(line, "curve");
      } else if (ws[0] == "expect") {
        v.expect = parse_expectation(ws.at(1));
      } else {
        fail("unexpected '" + ws[0] + "' inside variant");
      }
    }
    fail("missing 'end' after variant");
  }

  void statement(const std::string& line, const std::vector<std::string>& ws) {
    FamilySpec& f = *current_;
    const std::string& key = ws[0];
    if (auto d = as_definition(line)) {
      if (f.find_definition(d->name)) fail("'" + d->name + "' is defined twice");
      f.definitions.push_back(*d);
    } else if (key == "title") {
      f.title = rest(line, key);
    } else if (key == "variables") {
      f.variables.assign(ws.begin() + 1, ws.end());
      for (const auto& v : f.variables)
        if (!is_identifier(v) || v == "r" || v == "i" || v == "F") fail("bad variable name '" + v + "'");
    } else if (key == "grid") {
      std::vector<int> ram;
      for (long k : parse_ints(ws, 1)) ram.push_back(static_cast<int>(k));
      f.grid = ExponentGrid(ram);
    } else if (key == "signs") {
      for (long k : parse_ints(ws, 1)) {
        if (k != 1 && k != -1) fail("signs must be 1 or -1");
        f.signs.push_back(static_cast<int>(k));
      }
    } else if (key == "config") {
      config_ = matrix_block();
    } else if (key == "h") {
      h_ = parse_ints(ws, 1);
    } else if (key == "lattice") {
      f.lattice.B = matrix_block();
    } else if (key == "beta") {
      for (const auto& part : split_top_level(rest(line, key))) f.beta.push_back(to_affine_r(parse_expression(part)));
    } else if (key == "basis") {
      std::string body = rest(line, key);
      RawBasis b;
      auto colon = body.find(':');
      for (long k : parse_ints(words(body.substr(0, colon)))) {
        if (k < 1) fail("basis columns are 1-based");
        b.simplex.push_back(static_cast<std::size_t>(k - 1));
      }
      if (colon != std::string::npos) b.gamma = split_top_level(body.substr(colon + 1));
      raw_basis_.push_back(std::move(b));
    } else if (key == "reference") {
      long k = parse_long(ws.at(1));
      if (k < 1) fail("reference is a 1-based basis index");
      f.reference = static_cast<std::size_t>(k - 1);
    } else if (key == "coefficients") {
      f.coefficient_text = split_top_level(rest(line, key));
    } else if (key == "horn") {
      f.horn.push_back(rest(line, key));
    } else if (key == "horn-rank") {
      f.horn_rank = parse_long(ws.at(1));
    } else if (key == "relation") {
      f.relations.push_back(rest(line, key));
    } else if (key == "extra") {
      f.extras.push_back(rest(line, key));
    } else if (key == "power-form") {
      if (ws.size() != 2 || (ws[1] != "yes" && ws[1] != "no")) fail("power-form takes yes or no");
      f.power_form = ws[1] == "yes";
    } else if (key == "curve") {
      f.curve = rest(line, key);
    } else if (key == "discriminant") {
      f.discriminant = ws.at(1);
    } else if (key == "expect") {
      f.expect = parse_expectation(ws.at(1));
    } else if (key == "order") {
      f.default_order = parse_long(ws.at(1));
    } else if (key == "variant") {
      if (ws.size() != 2) fail("variant takes exactly one name");
      variant_block(ws[1]);
    } else {
      fail("unknown statement '" + key + "'");
    }
  }

  void finish(std::vector<FamilySpec>& out) {
    if (!current_) return;
    FamilySpec& f = *current_;
    try {
      if (f.variables.empty()) throw FamilyError("no variables declared");
      if (f.grid.nvars() == 0) f.grid = ExponentGrid::uniform(f.arity(), 1);
      if (f.grid.nvars() != f.arity()) throw FamilyError("grid needs one entry per variable");
      if (f.signs.empty()) f.signs.assign(f.arity(), 1);
      if (f.signs.size() != f.arity()) throw FamilyError("signs need one entry per variable");
      if (config_.empty()) throw FamilyError("missing config block");
      if (h_.empty()) throw FamilyError("missing h vector");
      f.config = PointConfig(config_, h_);
      if (f.lattice.B.size() != f.arity()) throw FamilyError("lattice needs one row per variable");
      if (f.beta.size() != f.config.rank()) throw FamilyError("beta needs one entry per config row");
      for (const auto& rb : raw_basis_) f.basis.push_back(resolve_basis(f, rb));
      if (f.basis.empty()) throw FamilyError("no basis entries");
      if (f.reference >= f.basis.size()) throw FamilyError("reference index out of range");
      if (!f.coefficient_text.empty()) {
        if (f.coefficient_text.size() != f.basis.size())
          throw FamilyError("coefficients need one entry per basis entry");
        for (const auto& c : f.coefficient_text) f.coefficients.push_back(to_r_poly(parse_expression(c)));
      }
      if (!f.find_definition("phi")) throw FamilyError("missing definition of phi");
      validate_family(f);
    } catch (const FamilyError& e) {
      throw FamilyError(source_ + ": family " + f.name + ": " + e.what());
    } catch (const std::exception& e) {
      throw FamilyError(source_ + ": family " + f.name + ": " + e.what());
    }
    out.push_back(std::move(f));
    current_.reset();
    config_.clear();
    h_.clear();
  }

  BasisEntry resolve_basis(const FamilySpec& f, const RawBasis& rb) const {
    BasisEntry b{rb.simplex, {}};
    if (rb.simplex.size() != f.config.rank()) throw FamilyError("basis simplex needs one column per config row");
    for (auto c : rb.simplex)
      if (c >= f.config.size()) throw FamilyError("basis column out of range");
    if (rb.gamma) {
      if (rb.gamma->size() != f.config.size()) throw FamilyError("gamma needs one entry per column");
      for (const auto& g : *rb.gamma) b.gamma.push_back(to_affine_r(parse_expression(g)));
      return b;
    }
    // γ is affine in r; interpolate the unique candidate at r = 0 and r = 1.
    auto c0 = gamma_candidates(f.config, f.beta_at(0), rb.simplex);
    auto c1 = gamma_candidates(f.config, f.beta_at(1), rb.simplex);
    if (c0.size() != 1 || c1.size() != 1)
      throw FamilyError("simplex has several gamma candidates; list gamma explicitly");
    for (std::size_t i = 0; i < c0[0].size(); ++i) b.gamma.push_back(AffineR{c0[0][i], c1[0][i] - c0[0][i]});
    return b;
  }

  std::string source_;
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
  std::optional<FamilySpec> current_;
  IntMatrix config_;
  IntVector h_;
  std::vector<RawBasis> raw_basis_;
};

}  // namespace

std::vector<FamilySpec> parse_families(const std::string& text, const std::string& source) {
  return FamilyParser(text, source).parse();
}

std::vector<FamilySpec> load_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FamilyError("cannot open family file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_families(buf.str(), path);
}

FamilySpec apply_variant(const FamilySpec& base, const std::string& variant) {
  for (const auto& v : base.variants) {
    if (v.name != variant) continue;
    FamilySpec out = base;
    out.variant = v.name;
    out.variants.clear();
    if (!v.title.empty()) out.title = v.title;
    for (const auto& d : v.definitions) set_definition(out.definitions, d);
    if (v.curve) out.curve = *v.curve;
    if (v.expect) out.expect = *v.expect;
    return out;
  }
  std::string known;
  for (const auto& v : base.variants) known += (known.empty() ? "" : ", ") + v.name;
  throw UnknownFamily("family " + base.name + " has no variant '" + variant + "'" +
                      (known.empty() ? "" : " (known: " + known + ")"));
}

void validate_family(const FamilySpec& f) {
  const auto& cfg = f.config;
  for (const auto& row : f.lattice.B) {
    if (row.size() != cfg.size()) throw FamilyError("lattice row has wrong length");
    for (std::size_t j = 0; j < cfg.rank(); ++j) {
      long s = 0;
      for (std::size_t i = 0; i < cfg.size(); ++i) s += cfg.A[j][i] * row[i];
      if (s != 0) throw FamilyError("lattice row is not a relation among the columns");
    }
  }
  if (!same_lattice(f.lattice.B, lattice_kernel(cfg).B))
    throw FamilyError("lattice rows do not generate the full lattice of relations");
  const Rational samples[] = {Rational(1, 3), Rational(2, 7), Rational(-5, 11)};
  for (std::size_t k = 0; k < f.basis.size(); ++k) {
    for (const auto& r : samples) {
      auto g = f.gamma_at(k, r);
      auto b = f.beta_at(r);
      for (std::size_t j = 0; j < cfg.rank(); ++j) {
        Rational s = 0;
        for (std::size_t i = 0; i < cfg.size(); ++i) s += cfg.A[j][i] * g[i];
        if (s != b[j]) throw FamilyError("basis entry " + std::to_string(k + 1) + ": A*gamma differs from beta");
      }
      for (std::size_t i = 0; i < g.size(); ++i) {
        bool on_simplex = std::find(f.basis[k].simplex.begin(), f.basis[k].simplex.end(), i) != f.basis[k].simplex.end();
        if (!on_simplex && !is_integer(g[i]))
          throw FamilyError("basis entry " + std::to_string(k + 1) + ": gamma off the simplex must be integral");
      }
    }
  }
  long vol = simplex_volume(cfg, f.triangulation());
  if (static_cast<long>(f.basis.size()) != vol)
    throw FamilyError("basis has " + std::to_string(f.basis.size()) + " entries but the volume is " +
                      std::to_string(vol));
  for (const auto& h : f.horn) ThetaOperator::parse(h, f.variables);
  compile_recipes(f);
  if (!f.curve.empty()) family_curve(f);
  if (!f.discriminant.empty()) {
    if (f.curve.empty()) throw FamilyError("discriminant needs a curve");
    definition_poly(f, f.discriminant);
  }
  for (const auto& v : f.variants) compile_recipes(apply_variant(f, v.name));
}

FamilyRecipes compile_recipes(const FamilySpec& spec) {
  RecipeCompiler rc(spec.variables);
  FamilyRecipes out;
  for (const auto& d : spec.definitions) {
    rc.define(d.name, parse_expression(d.text));
    out.named[d.name] = rc.get(d.name);
  }
  out.phi = rc.get("phi");
  std::vector<Recipe> all{out.phi};
  for (const auto& rel : spec.relations) {
    out.relations.emplace_back(rel, rc.compile(parse_expression(rel)));
    all.push_back(out.relations.back().second);
  }
  for (const auto& e : spec.extras) out.extras.push_back(rc.compile(parse_expression(e)));
  for (const auto& [name, rec] : out.named) all.push_back(rec);
  auto slots = branch_slots(all);
  out.slots.assign(slots.begin(), slots.end());
  return out;
}

Poly discriminant_last(const Poly& p) {
  std::size_t n = p.nvars();
  if (n == 0) throw std::invalid_argument("discriminant of a constant");
  std::size_t t = n - 1;
  int deg = p.degree(t);
  std::vector<Poly> c(deg + 1, Poly(n));
  for (const auto& [m, v] : p.terms()) {
    auto mm = m;
    int k = mm[t];
    mm[t] = 0;
    c[k].add_term(mm, v);
  }
  auto k = [&](long v) { return Poly::constant(n, GaussianRational(v)); };
  if (deg == 2) return c[1] * c[1] - k(4) * c[2] * c[0];
  if (deg == 3) {
    const Poly &a = c[3], &b = c[2], &cc = c[1], &d = c[0];
    return k(18) * a * b * cc * d - k(4) * b.pow(3) * d + b * b * cc * cc - k(4) * a * cc.pow(3) -
           k(27) * a * a * d * d;
  }
  throw std::invalid_argument("discriminant implemented for degree 2 and 3 only");
}

Poly family_curve(const FamilySpec& spec) {
  std::map<std::string, std::size_t> vars;
  for (std::size_t j = 0; j < spec.arity(); ++j) vars[spec.variables[j]] = j;
  vars["F"] = spec.arity();
  return to_poly(parse_expression(spec.curve), vars, spec.arity() + 1);
}

Poly definition_poly(const FamilySpec& spec, const std::string& name) {
  const Definition* d = spec.find_definition(name);
  if (!d) throw FamilyError("undefined name '" + name + "'");
  std::map<std::string, std::size_t> vars;
  for (std::size_t j = 0; j < spec.arity(); ++j) vars[spec.variables[j]] = j;
  Scope scope;
  for (const auto& def : spec.definitions) scope[def.name] = parse_expression(def.text);
  // Polynomials live on the curve's variable set (variables then F).
  return to_poly(parse_expression(d->text), vars, spec.arity() + 1, scope);
}

}  // namespace ahg
