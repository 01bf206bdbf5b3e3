#include "ahg/recipe.hpp"

#include <numeric>

namespace ahg {

using Kind = RecipeNode::Kind;

Recipe recipe_const(const GaussianRational& c) {
  RecipeNode n;
  n.kind = Kind::Const;
  n.value = c;
  return std::make_shared<const RecipeNode>(std::move(n));
}

Recipe recipe_node(Kind kind, std::vector<Recipe> children) {
  RecipeNode n;
  n.kind = kind;
  n.children = std::move(children);
  return std::make_shared<const RecipeNode>(std::move(n));
}

namespace {

Recipe make(RecipeNode n) { return std::make_shared<const RecipeNode>(std::move(n)); }

Recipe add_recipes(const Recipe& a, const Recipe& b) {
  if (!a) return b;
  if (!b) return a;
  return recipe_node(Kind::Add, {a, b});
}

Recipe mul_recipes(const Recipe& a, const Recipe& b) {
  if (a->kind == Kind::Const && a->value.is_one()) return b;
  if (b->kind == Kind::Const && b->value.is_one()) return a;
  return recipe_node(Kind::Mul, {a, b});
}

std::optional<Poly> try_r_poly(const ExprPtr& e) {
  try {
    return to_r_poly(e);
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

bool mentions(const ExprPtr& e, const std::string& name) {
  if (e->kind == Expr::Kind::Symbol) return e->name == name;
  for (const auto& a : e->args)
    if (mentions(a, name)) return true;
  return false;
}

long ceil_weight(const ExponentGrid& grid, const std::vector<Rational>& m) {
  Rational w = 0;
  for (const auto& q : m) w += q;
  w *= grid.lcm();
  w.canonicalize();
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), w.get_num_mpz_t(), w.get_den_mpz_t());
  return c.get_si();
}

}  // namespace

void RecipeCompiler::define(const std::string& name, const ExprPtr& e) {
  if (var_index(name) || name == "r" || name == "i")
    throw ParseError("cannot redefine reserved name '" + name + "'");
  compiled_[name] = compile(e);
  scope_[name] = e;
}

Recipe RecipeCompiler::get(const std::string& name) const {
  auto it = compiled_.find(name);
  if (it == compiled_.end()) throw ParseError("undefined name '" + name + "'");
  return it->second;
}

Recipe RecipeCompiler::compile(const ExprPtr& e) { return lower(e); }

std::optional<std::size_t> RecipeCompiler::var_index(const std::string& name) const {
  for (std::size_t j = 0; j < variables_.size(); ++j)
    if (variables_[j] == name) return j;
  return std::nullopt;
}

std::optional<std::pair<Rational, std::vector<Rational>>> RecipeCompiler::as_monomial(const ExprPtr& e) const {
  using Result = std::pair<Rational, std::vector<Rational>>;
  std::size_t d = variables_.size();
  switch (e->kind) {
    case Expr::Kind::Number:
      return Result{e->number, std::vector<Rational>(d)};
    case Expr::Kind::Symbol: {
      auto j = var_index(e->name);
      if (!j) return std::nullopt;
      std::vector<Rational> m(d);
      m[*j] = 1;
      return Result{1, m};
    }
    case Expr::Kind::Mul: {
      auto a = as_monomial(e->args[0]), b = as_monomial(e->args[1]);
      if (!a || !b) return std::nullopt;
      for (std::size_t j = 0; j < d; ++j) a->second[j] += b->second[j];
      a->first *= b->first;
      return a;
    }
    case Expr::Kind::Pow: {
      auto a = as_monomial(e->args[0]);
      if (!a) return std::nullopt;
      Rational p;
      try {
        p = to_rational(e->args[1]);
      } catch (const ParseError&) {
        return std::nullopt;
      }
      if (!is_integer(p) && a->first != 1) return std::nullopt;
      for (auto& q : a->second) q *= p;
      if (a->first != 1) {
        long n = p.get_num().get_si();
        Rational c = 1;
        for (long k = 0; k < std::labs(n); ++k) c *= a->first;
        a->first = n < 0 ? Rational(1 / c) : c;
      }
      return a;
    }
    default:
      return std::nullopt;
  }
}

std::map<long, Recipe> RecipeCompiler::as_f_polynomial(const ExprPtr& e) {
  if (!mentions(e, "F")) return {{0, lower(e)}};
  switch (e->kind) {
    case Expr::Kind::Symbol:
      return {{1, recipe_const(1)}};
    case Expr::Kind::Add:
    case Expr::Kind::Sub: {
      auto a = as_f_polynomial(e->args[0]);
      auto b = as_f_polynomial(e->args[1]);
      for (auto& [k, c] : b) {
        Recipe t = e->kind == Expr::Kind::Sub ? recipe_node(Kind::Neg, {c}) : c;
        a[k] = add_recipes(a[k], t);
      }
      return a;
    }
    case Expr::Kind::Neg: {
      auto a = as_f_polynomial(e->args[0]);
      for (auto& [k, c] : a) c = recipe_node(Kind::Neg, {c});
      return a;
    }
    case Expr::Kind::Mul: {
      auto a = as_f_polynomial(e->args[0]);
      auto b = as_f_polynomial(e->args[1]);
      std::map<long, Recipe> out;
      for (const auto& [i, ca] : a)
        for (const auto& [j, cb] : b) out[i + j] = add_recipes(out[i + j], mul_recipes(ca, cb));
      return out;
    }
    case Expr::Kind::Pow: {
      Rational p = to_rational(e->args[1]);
      if (!is_integer(p) || sgn(p) < 0) throw ParseError("F must appear with non-negative integer powers");
      std::map<long, Recipe> out{{0, recipe_const(1)}};
      auto base = as_f_polynomial(e->args[0]);
      for (long n = p.get_num().get_si(); n > 0; --n) {
        std::map<long, Recipe> next;
        for (const auto& [i, ca] : out)
          for (const auto& [j, cb] : base) next[i + j] = add_recipes(next[i + j], mul_recipes(ca, cb));
        out = std::move(next);
      }
      return out;
    }
    case Expr::Kind::Div: {
      if (mentions(e->args[1], "F")) throw ParseError("F may not appear in a denominator");
      auto a = as_f_polynomial(e->args[0]);
      Recipe inv = lower(make_node(Expr::Kind::Div, {make_number(1), e->args[1]}));
      for (auto& [k, c] : a) c = mul_recipes(c, inv);
      return a;
    }
    default:
      throw ParseError("unsupported use of F in '" + e->to_string() + "'");
  }
}

Recipe RecipeCompiler::lower(const ExprPtr& e) {
  if (e->kind != Expr::Kind::Number && e->kind != Expr::Kind::Symbol) {
    if (auto p = try_r_poly(e)) {
      RecipeNode n;
      if (p->is_constant()) {
        n.kind = Kind::Const;
        n.value = p->constant_term();
      } else {
        n.kind = Kind::RConst;
        n.rpoly = *p;
      }
      return make(std::move(n));
    }
  }
  switch (e->kind) {
    case Expr::Kind::Number:
      return recipe_const(GaussianRational(e->number));
    case Expr::Kind::Symbol: {
      if (auto j = var_index(e->name)) {
        RecipeNode n;
        n.kind = Kind::Var;
        n.var = *j;
        return make(std::move(n));
      }
      if (e->name == "i") return recipe_const(GaussianRational::i());
      if (e->name == "r") {
        RecipeNode n;
        n.kind = Kind::RConst;
        n.rpoly = Poly::variable(1, 0);
        return make(std::move(n));
      }
      return get(e->name);
    }
    case Expr::Kind::Call: {
      if (e->name == "sqrt") {
        if (e->args.empty() || e->args.size() > 2) throw ParseError("sqrt takes one argument and an optional slot");
        RecipeNode n;
        if (e->args.size() == 2) {
          if (e->args[1]->kind != Expr::Kind::Symbol) throw ParseError("sqrt slot must be a name");
          n.slot = e->args[1]->name;
        }
        const auto& arg = e->args[0];
        if (arg->kind == Expr::Kind::Symbol && var_index(arg->name)) {
          n.kind = Kind::VarRoot;
          n.var = *var_index(arg->name);
        } else {
          n.kind = Kind::Sqrt;
          n.children = {lower(arg)};
        }
        return make(std::move(n));
      }
      if (e->name == "algroot") {
        if (e->args.size() < 2) throw ParseError("algroot takes a polynomial in F and a seed");
        RecipeNode n;
        n.kind = Kind::AlgRoot;
        Poly s = to_poly(e->args[1], {}, 0);
        if (!s.is_constant()) throw ParseError("algroot seed must be a constant");
        n.seed = s.constant_term();
        for (std::size_t k = 2; k < e->args.size(); ++k) {
          const auto& a = e->args[k];
          if (a->kind == Expr::Kind::Symbol) {
            n.slot = a->name;
          } else if (a->kind == Expr::Kind::Call && a->name == "ram") {
            if (a->args.size() != variables_.size()) throw ParseError("ram(...) needs one entry per variable");
            for (const auto& x : a->args) {
              Rational q = to_rational(x);
              if (!is_integer(q) || sgn(q) <= 0) throw ParseError("ram entries must be positive integers");
              n.ram_hint.push_back(static_cast<int>(q.get_num().get_si()));
            }
          } else {
            throw ParseError("unexpected algroot argument '" + a->to_string() + "'");
          }
        }
        auto coeffs = as_f_polynomial(e->args[0]);
        long deg = coeffs.empty() ? 0 : coeffs.rbegin()->first;
        if (deg < 1) throw ParseError("algroot polynomial has no F term");
        for (long k = 0; k <= deg; ++k) n.children.push_back(coeffs.count(k) && coeffs[k] ? coeffs[k] : recipe_const(0));
        return make(std::move(n));
      }
      throw ParseError("unknown function '" + e->name + "'");
    }
    case Expr::Kind::Add:
      return recipe_node(Kind::Add, {lower(e->args[0]), lower(e->args[1])});
    case Expr::Kind::Sub:
      return recipe_node(Kind::Add, {lower(e->args[0]), recipe_node(Kind::Neg, {lower(e->args[1])})});
    case Expr::Kind::Mul:
      return recipe_node(Kind::Mul, {lower(e->args[0]), lower(e->args[1])});
    case Expr::Kind::Neg:
      return recipe_node(Kind::Neg, {lower(e->args[0])});
    case Expr::Kind::Div: {
      Recipe num = lower(e->args[0]);
      if (auto m = as_monomial(e->args[1])) {
        if (sgn(m->first) == 0) throw ParseError("division by zero in '" + e->to_string() + "'");
        Recipe scaled = mul_recipes(recipe_const(GaussianRational(Rational(1 / m->first))), num);
        bool trivial = true;
        for (const auto& q : m->second) trivial = trivial && sgn(q) == 0;
        if (trivial) return scaled;
        for (const auto& q : m->second)
          if (sgn(q) < 0) throw ParseError("division by a monomial with negative exponent");
        RecipeNode n;
        n.kind = Kind::DivMonomial;
        n.monomial = m->second;
        n.children = {scaled};
        return make(std::move(n));
      }
      return recipe_node(Kind::Mul, {num, recipe_node(Kind::Inv, {lower(e->args[1])})});
    }
    case Expr::Kind::Pow: {
      const auto& base = e->args[0];
      AffineR p = to_affine_r(e->args[1]);
      if (base->kind == Expr::Kind::Symbol && var_index(base->name)) {
        RecipeNode n;
        n.kind = Kind::Monomial;
        n.exponents.assign(variables_.size(), AffineR{});
        n.exponents[*var_index(base->name)] = p;
        return make(std::move(n));
      }
      RecipeNode n;
      n.children = {lower(base)};
      if (sgn(p.c1) == 0 && is_integer(p.c0) && sgn(p.c0) >= 0) {
        n.kind = Kind::PowInt;
        n.power = p.c0.get_num().get_si();
      } else {
        n.kind = Kind::PowRat;
        n.exponent = p;
      }
      return make(std::move(n));
    }
  }
  throw ParseError("bad expression");
}

namespace {

void collect_slots(const Recipe& r, std::set<std::string>& out, std::set<const RecipeNode*>& seen) {
  if (!r || !seen.insert(r.get()).second) return;
  if (!r->slot.empty()) out.insert(r->slot);
  for (const auto& c : r->children) collect_slots(c, out, seen);
}

}  // namespace

std::set<std::string> branch_slots(const std::vector<Recipe>& recipes) {
  std::set<std::string> out;
  std::set<const RecipeNode*> seen;
  for (const auto& r : recipes) collect_slots(r, out, seen);
  return out;
}

int RecipeEvaluator::sign(const std::string& slot) const {
  if (slot.empty()) return 1;
  auto it = branches_.find(slot);
  return it == branches_.end() ? 1 : it->second;
}

PuiseuxSeries RecipeEvaluator::eval(const Recipe& rec, long order) {
  auto key = std::make_pair(rec.get(), order);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  PuiseuxSeries out = compute(*rec, order);
  memo_.emplace(key, out);
  return out;
}

PuiseuxSeries RecipeEvaluator::compute(const RecipeNode& n, long order) {
  switch (n.kind) {
    case Kind::Const:
      return PuiseuxSeries::constant(grid_, n.value, order);
    case Kind::RConst:
      return PuiseuxSeries::constant(grid_, n.rpoly.eval({GaussianRational(r_)}), order);
    case Kind::Var:
      return PuiseuxSeries::variable(grid_, n.var, order);
    case Kind::VarRoot: {
      if (grid_.ram[n.var] % 2 != 0)
        throw std::invalid_argument("square root of a variable needs an even ramification on that variable");
      Exponent e(grid_.nvars(), 0);
      e[n.var] = grid_.ram[n.var] / 2;
      return PuiseuxSeries::monomial(grid_, e, GaussianRational(sign(n.slot)), order);
    }
    case Kind::Monomial: {
      std::vector<Rational> m;
      Exponent e;
      bool on_grid = true;
      for (std::size_t j = 0; j < n.exponents.size(); ++j) {
        m.push_back(n.exponents[j].at(r_));
        Rational scaled = m.back() * grid_.ram[j];
        scaled.canonicalize();
        on_grid = on_grid && sgn(scaled) >= 0 && is_integer(scaled);
        if (on_grid) e.push_back(static_cast<int>(scaled.get_num().get_si()));
      }
      if (on_grid) return PuiseuxSeries::monomial(grid_, e, 1, order);
      return PuiseuxSeries::constant(grid_, 1, order).shifted(m);
    }
    case Kind::Add: {
      PuiseuxSeries acc = eval(n.children[0], order);
      for (std::size_t k = 1; k < n.children.size(); ++k) acc = add(acc, eval(n.children[k], order));
      return acc;
    }
    case Kind::Mul: {
      PuiseuxSeries acc = eval(n.children[0], order);
      for (std::size_t k = 1; k < n.children.size(); ++k) acc = mul(acc, eval(n.children[k], order));
      return acc;
    }
    case Kind::Neg:
      return -eval(n.children[0], order);
    case Kind::Inv:
      return invert(eval(n.children[0], order));
    case Kind::PowInt:
      return pow_int(eval(n.children[0], order), n.power);
    case Kind::PowRat:
      return pow_rational(eval(n.children[0], order), n.exponent.at(r_));
    case Kind::Sqrt: {
      Branch b = sign(n.slot) > 0 ? Branch::Positive : Branch::Negative;
      return pow_rational(eval(n.children[0], order), Rational(1, 2), b);
    }
    case Kind::DivMonomial: {
      long extra = ceil_weight(grid_, n.monomial);
      return monomial_div(eval(n.children[0], order + extra), n.monomial, DivisionMode::Strict);
    }
    case Kind::AlgRoot: {
      std::vector<PuiseuxSeries> coeffs;
      for (const auto& c : n.children) coeffs.push_back(eval(c, order + grid_.lcm()));
      Branch b = sign(n.slot) > 0 ? Branch::Positive : Branch::Negative;
      return algebraic_root(coeffs, n.seed, n.ram_hint, b);
    }
  }
  throw std::logic_error("unknown recipe node");
}

PuiseuxSeries eval_recipe(const Recipe& rec, const Rational& r, long order, const ExponentGrid& grid,
                          const BranchAssignment& branches) {
  RecipeEvaluator ev(grid, r, branches);
  return ev.eval(rec, order);
}

PuiseuxSeries eval_polynomial(const std::vector<PuiseuxSeries>& coeffs, const PuiseuxSeries& f) {
  if (coeffs.empty()) throw std::invalid_argument("empty polynomial");
  PuiseuxSeries acc = coeffs.back();
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) acc = add(mul(acc, f), coeffs[k]);
  return acc;
}

namespace {

GaussianRational eval_constant_poly(const std::vector<PuiseuxSeries>& coeffs, const GaussianRational& x,
                                    int derivative) {
  GaussianRational acc = 0;
  GaussianRational xp = 1;
  for (std::size_t k = derivative; k < coeffs.size(); ++k) {
    GaussianRational factor = 1;
    for (int d = 0; d < derivative; ++d) factor *= GaussianRational(static_cast<long>(k) - d);
    acc += coeffs[k].constant_term() * factor * xp;
    xp *= x;
  }
  return acc;
}

std::vector<PuiseuxSeries> derivative(const std::vector<PuiseuxSeries>& coeffs) {
  std::vector<PuiseuxSeries> out;
  for (std::size_t k = 1; k < coeffs.size(); ++k) out.push_back(scale(coeffs[k], GaussianRational(static_cast<long>(k))));
  return out;
}

long min_order(const std::vector<PuiseuxSeries>& coeffs) {
  long o = coeffs.front().order();
  for (const auto& c : coeffs) o = std::min(o, c.order());
  return o;
}

}  // namespace

PuiseuxSeries algebraic_root(const std::vector<PuiseuxSeries>& coeffs_in, const GaussianRational& seed,
                             const std::vector<int>& ram_hint, Branch branch) {
  if (coeffs_in.size() < 2) throw std::invalid_argument("algebraic_root needs a polynomial of degree ≥ 1");
  for (const auto& c : coeffs_in)
    for (const auto& q : c.offset())
      if (sgn(q) != 0) throw std::invalid_argument("algebraic_root coefficients must have zero offset");
  std::vector<int> ram = coeffs_in.front().grid().ram;
  for (const auto& c : coeffs_in)
    for (std::size_t j = 0; j < ram.size(); ++j) ram[j] = std::lcm(ram[j], c.grid().ram[j]);
  if (!ram_hint.empty()) {
    if (ram_hint.size() != ram.size()) throw std::invalid_argument("ramification hint has wrong length");
    for (std::size_t j = 0; j < ram.size(); ++j) ram[j] = std::lcm(ram[j], ram_hint[j]);
  }
  std::vector<PuiseuxSeries> coeffs;
  for (const auto& c : coeffs_in) coeffs.push_back(c.regrid(ram));
  ExponentGrid grid(ram);
  long order = min_order(coeffs);

  if (!eval_constant_poly(coeffs, seed, 0).is_zero())
    throw SeedNotRoot("seed " + seed.to_string() + " is not a root of the polynomial at the origin");
  GaussianRational d1 = eval_constant_poly(coeffs, seed, 1);
  auto dcoeffs = derivative(coeffs);

  if (!d1.is_zero()) {
    // Newton iteration doubles the number of correct weights each round.
    PuiseuxSeries f = PuiseuxSeries::constant(grid, seed, order);
    for (long known = 1; known < 2 * order + 2; known *= 2) {
      PuiseuxSeries p = eval_polynomial(coeffs, f);
      if (p.is_zero()) break;
      f = sub(f, mul(p, invert(eval_polynomial(dcoeffs, f))));
    }
    if (!eval_polynomial(coeffs, f).is_zero()) throw std::logic_error("Newton iteration did not converge");
    return f;
  }

  if (ram_hint.empty())
    throw RamificationRequired("seed " + seed.to_string() + " is a multiple root; a ramification hint is needed");
  GaussianRational a = eval_constant_poly(coeffs, seed, 2) * GaussianRational(Rational(1, 2));
  if (a.is_zero()) throw std::domain_error("algebraic_root: roots of multiplicity above two are not supported");

  Exponent v;
  for (std::size_t j = 0; j < ram.size(); ++j) {
    Exponent e(ram.size(), 0);
    e[j] = 1;
    if (grid.weight(e) == 1) {
      if (!v.empty()) throw std::domain_error("algebraic_root: ramified direction is not unique");
      v = e;
    }
  }
  if (v.empty()) throw std::domain_error("algebraic_root: hint grid has no weight-one monomial");
  Exponent v2(v);
  for (auto& x : v2) x *= 2;

  PuiseuxSeries seed_series = PuiseuxSeries::constant(grid, seed, order);
  PuiseuxSeries p0 = eval_polynomial(coeffs, seed_series);
  if (!p0.coeff(v).is_zero()) throw std::domain_error("algebraic_root: hint inconsistent with the polynomial");
  GaussianRational b = eval_polynomial(dcoeffs, seed_series).coeff(v);
  GaussianRational c = p0.coeff(v2);
  GaussianRational disc = b * b - GaussianRational(4) * a * c;
  auto root = disc.sqrt();
  if (!root) throw NonRepresentableConstantPower("discriminant " + disc.to_string() + " has no exact square root");
  GaussianRational s = sign_of(branch) > 0 ? *root : -*root;
  GaussianRational alpha = (-b + s) / (GaussianRational(2) * a);
  GaussianRational l1 = b + GaussianRational(2) * a * alpha;
  if (l1.is_zero()) throw std::domain_error("algebraic_root: degenerate linearization");
  GaussianRational l1inv = l1.inverse();

  PuiseuxSeries f = seed_series;
  f.add_term(v, alpha);
  long out_order = order - 1;
  for (long w = 2; w < out_order; ++w) {
    PuiseuxSeries p = eval_polynomial(coeffs, f);
    for (const auto& [e, coef] : p.terms()) {
      long we = grid.weight(e);
      if (we <= w && !coef.is_zero())
        throw std::domain_error("algebraic_root: lifting failed at " + format_exponent(p.absolute_exponent(e)));
      if (we != w + 1) continue;
      Exponent ne(e);
      for (std::size_t j = 0; j < ne.size(); ++j) {
        ne[j] -= v[j];
        if (ne[j] < 0) throw NotDivisible("algebraic_root: residual not divisible by the ramified monomial",
                                          p.absolute_exponent(e));
      }
      f.add_term(ne, -coef * l1inv);
    }
  }
  PuiseuxSeries out = f.truncated(out_order);
  PuiseuxSeries check = eval_polynomial(coeffs, out);
  if (!check.is_zero()) throw std::logic_error("algebraic_root: residual does not vanish");
  return out;
}

}  // namespace ahg
