#include "ahg/homops.hpp"

#include <algorithm>

namespace ahg {

ThetaOperator::ThetaOperator(std::size_t nvars, std::map<std::vector<Rational>, Poly> terms, std::string text)
    : nvars_(nvars), terms_(std::move(terms)), text_(std::move(text)) {
  for (auto it = terms_.begin(); it != terms_.end();) it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
}

ThetaOperator ThetaOperator::operator+(const ThetaOperator& o) const {
  auto terms = terms_;
  for (const auto& [a, p] : o.terms_) {
    auto [it, inserted] = terms.emplace(a, p);
    if (!inserted) it->second += p;
  }
  return ThetaOperator(nvars_, std::move(terms));
}

ThetaOperator ThetaOperator::operator*(const ThetaOperator& o) const {
  // (z^a P(θ))(z^b Q(θ)) = z^{a+b} P(θ + b) Q(θ).
  std::map<std::vector<Rational>, Poly> terms;
  for (const auto& [a, p] : terms_)
    for (const auto& [b, q] : o.terms_) {
      std::vector<Rational> ab(nvars_), shift(nvars_ + 1, Rational(0));
      for (std::size_t j = 0; j < nvars_; ++j) {
        ab[j] = a[j] + b[j];
        shift[j] = b[j];
      }
      Poly prod = p.shift(shift) * q;
      auto [it, inserted] = terms.emplace(ab, prod);
      if (!inserted) it->second += prod;
    }
  return ThetaOperator(nvars_, std::move(terms));
}

ThetaOperator ThetaOperator::scaled(const GaussianRational& c) const {
  auto terms = terms_;
  for (auto& [a, p] : terms) p = p.scaled(c);
  return ThetaOperator(nvars_, std::move(terms));
}

namespace {

ThetaOperator lower_operator(const ExprPtr& e, const std::vector<std::string>& vars, const Scope& scope, int depth) {
  if (depth > 200) throw ParseError("definitions nest too deeply (cycle?)");
  std::size_t d = vars.size();
  auto rec = [&](const ExprPtr& x) { return lower_operator(x, vars, scope, depth + 1); };
  auto scalar = [&](const Poly& p) {
    return ThetaOperator(d, {{std::vector<Rational>(d, Rational(0)), p}});
  };
  auto var_index = [&](const ExprPtr& x) -> std::size_t {
    if (x->kind == Expr::Kind::Symbol) {
      auto it = std::find(vars.begin(), vars.end(), x->name);
      if (it != vars.end()) return static_cast<std::size_t>(it - vars.begin());
    }
    if (x->kind == Expr::Kind::Number && is_integer(x->number) && x->number >= 1 && x->number <= long(d))
      return x->number.get_num().get_ui() - 1;
    throw ParseError("theta() expects a variable name or index, got '" + x->to_string() + "'");
  };
  switch (e->kind) {
    case Expr::Kind::Number:
      return scalar(Poly::constant(d + 1, GaussianRational(e->number)));
    case Expr::Kind::Symbol: {
      auto it = std::find(vars.begin(), vars.end(), e->name);
      if (it != vars.end()) {
        std::vector<Rational> a(d, Rational(0));
        a[static_cast<std::size_t>(it - vars.begin())] = 1;
        return ThetaOperator(d, {{a, Poly::constant(d + 1, GaussianRational(1))}});
      }
      if (e->name == "r") return scalar(Poly::variable(d + 1, d));
      if (e->name == "i") return scalar(Poly::constant(d + 1, GaussianRational::i()));
      if (auto s = scope.find(e->name); s != scope.end()) return rec(s->second);
      throw ParseError("unknown symbol '" + e->name + "' in operator");
    }
    case Expr::Kind::Call:
      if (e->name == "theta" && e->args.size() == 1) return scalar(Poly::variable(d + 1, var_index(e->args[0])));
      throw ParseError("unknown operator function '" + e->name + "'");
    case Expr::Kind::Add:
      return rec(e->args[0]) + rec(e->args[1]);
    case Expr::Kind::Sub:
      return rec(e->args[0]) + rec(e->args[1]).scaled(GaussianRational(-1));
    case Expr::Kind::Mul:
      return rec(e->args[0]) * rec(e->args[1]);
    case Expr::Kind::Neg:
      return rec(e->args[0]).scaled(GaussianRational(-1));
    case Expr::Kind::Div: {
      Rational c = to_rational(e->args[1], scope);
      if (sgn(c) == 0) throw ParseError("division by zero in operator");
      return rec(e->args[0]).scaled(GaussianRational(1 / c));
    }
    case Expr::Kind::Pow: {
      Rational n = to_rational(e->args[1], scope);
      if (!is_integer(n) || sgn(n) < 0) throw ParseError("operator exponents must be non-negative integers");
      ThetaOperator base = rec(e->args[0]);
      ThetaOperator out = scalar(Poly::constant(d + 1, GaussianRational(1)));
      for (long k = 0; k < n.get_num().get_si(); ++k) out = out * base;
      return out;
    }
  }
  throw ParseError("bad operator expression");
}

}  // namespace

ThetaOperator ThetaOperator::from_expr(const ExprPtr& e, const std::vector<std::string>& variables, const Scope& scope) {
  ThetaOperator op = lower_operator(e, variables, scope, 0);
  op.text_ = e->to_string();
  return op;
}

ThetaOperator ThetaOperator::parse(std::string_view text, const std::vector<std::string>& variables,
                                   const Scope& scope) {
  ThetaOperator op = from_expr(parse_expression(text), variables, scope);
  op.text_ = std::string(text);
  return op;
}

long ThetaOperator::degree_shift(const ExponentGrid& grid) const {
  long shift = 0;
  for (const auto& [a, p] : terms_) {
    Rational w = 0;
    for (std::size_t j = 0; j < a.size(); ++j) w += a[j] * grid.lcm();
    if (!is_integer(w)) throw std::domain_error("operator monomial is not on the series grid");
    shift = std::max(shift, w.get_num().get_si());
  }
  return shift;
}

PuiseuxSeries apply_theta_op(const ThetaOperator& op, const PuiseuxSeries& s, const Rational& r) {
  std::size_t d = op.nvars();
  if (d != s.nvars()) throw std::invalid_argument("operator and series have different variable counts");
  PuiseuxSeries result(s.grid(), s.offset(), s.order());
  std::vector<std::vector<GaussianRational>> points;
  points.reserve(s.terms().size());
  for (const auto& [e, c] : s.terms()) {
    std::vector<GaussianRational> pt;
    for (const auto& q : s.absolute_exponent(e)) pt.emplace_back(q);
    pt.emplace_back(r);
    points.push_back(std::move(pt));
  }
  for (const auto& [a, p] : op.terms()) {
    PuiseuxSeries part(s.grid(), s.offset(), s.order());
    std::size_t k = 0;
    for (const auto& [e, c] : s.terms()) {
      GaussianRational v = p.eval(points[k++]);
      if (!v.is_zero()) part.add_term(e, v * c);
    }
    result = add(result, part.shifted(a));
  }
  long base = s.order() * (result.grid().lcm() / s.grid().lcm());
  long target = base - op.degree_shift(result.grid());
  return target < result.order() ? result.truncated(target) : result;
}

std::optional<MismatchCertificate> first_nonzero(const PuiseuxSeries& residual, const std::string& context) {
  PuiseuxSeries zero(residual.grid(), residual.offset(), residual.order());
  auto cert = first_difference(zero, residual);
  if (cert) cert->context = context;
  return cert;
}

AnnihilationVerdict annihilation_check(const ThetaOperator& op, const PuiseuxSeries& s, const Rational& r) {
  if (s.order() <= op.degree_shift(s.grid()))
    throw InsufficientOrder("series order " + std::to_string(s.order()) + " does not exceed the operator shift");
  auto residual = apply_theta_op(op, s, r);
  AnnihilationVerdict v;
  v.certificate = first_nonzero(residual, op.text());
  v.annihilated = !v.certificate;
  v.verified_order = v.annihilated ? residual.order() : residual.valuation();
  return v;
}

}  // namespace ahg
