#include "ahg/expr.hpp"

#include <cctype>

namespace ahg {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    auto e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(text_) + "'");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make_node(Expr::Kind::Add, {lhs, term()});
      else if (accept('-'))
        lhs = make_node(Expr::Kind::Sub, {lhs, term()});
      else
        return lhs;
    }
  }

  ExprPtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make_node(Expr::Kind::Mul, {lhs, unary()});
      else if (accept('/'))
        lhs = make_node(Expr::Kind::Div, {lhs, unary()});
      else
        return lhs;
    }
  }

  ExprPtr unary() {
    if (accept('-')) return make_node(Expr::Kind::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  ExprPtr power() {
    auto base = atom();
    if (accept('^')) return make_node(Expr::Kind::Pow, {base, unary()});
    return base;
  }

  ExprPtr atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return make_number(Rational(Integer(std::string(text_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (!accept('(')) return make_symbol(std::move(name));
      Expr call;
      call.kind = Expr::Kind::Call;
      call.name = std::move(name);
      if (!accept(')')) {
        do call.args.push_back(expr());
        while (accept(','));
        if (!accept(')')) fail("expected ')' after arguments");
      }
      return std::make_shared<const Expr>(std::move(call));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Poly lower(const ExprPtr& e, const std::map<std::string, std::size_t>& vars, std::size_t nvars, const Scope& scope,
           int depth) {
  if (depth > 200) throw ParseError("definitions nest too deeply (cycle?)");
  auto rec = [&](const ExprPtr& x) { return lower(x, vars, nvars, scope, depth + 1); };
  switch (e->kind) {
    case Expr::Kind::Number:
      return Poly::constant(nvars, GaussianRational(e->number));
    case Expr::Kind::Symbol: {
      if (auto it = vars.find(e->name); it != vars.end()) return Poly::variable(nvars, it->second);
      if (e->name == "i") return Poly::constant(nvars, GaussianRational::i());
      if (auto it = scope.find(e->name); it != scope.end()) return rec(it->second);
      throw ParseError("unknown symbol '" + e->name + "'");
    }
    case Expr::Kind::Call:
      throw ParseError("function '" + e->name + "' is not allowed in a polynomial expression");
    case Expr::Kind::Add:
      return rec(e->args[0]) + rec(e->args[1]);
    case Expr::Kind::Sub:
      return rec(e->args[0]) - rec(e->args[1]);
    case Expr::Kind::Mul:
      return rec(e->args[0]) * rec(e->args[1]);
    case Expr::Kind::Neg:
      return -rec(e->args[0]);
    case Expr::Kind::Div: {
      Poly den = rec(e->args[1]);
      if (!den.is_constant() || den.is_zero()) throw ParseError("division by a non-constant in '" + e->to_string() + "'");
      return rec(e->args[0]).scaled(den.constant_term().inverse());
    }
    case Expr::Kind::Pow: {
      Rational n = to_rational(e->args[1], scope);
      if (!is_integer(n) || sgn(n) < 0) throw ParseError("exponent must be a non-negative integer in '" + e->to_string() + "'");
      return rec(e->args[0]).pow(static_cast<unsigned>(n.get_num().get_ui()));
    }
  }
  throw ParseError("bad expression");
}

}  // namespace

ExprPtr make_number(const Rational& q) {
  Expr e;
  e.kind = Expr::Kind::Number;
  e.number = q;
  return std::make_shared<const Expr>(std::move(e));
}

ExprPtr make_symbol(std::string name) {
  Expr e;
  e.kind = Expr::Kind::Symbol;
  e.name = std::move(name);
  return std::make_shared<const Expr>(std::move(e));
}

ExprPtr make_node(Expr::Kind kind, std::vector<ExprPtr> args) {
  Expr e;
  e.kind = kind;
  e.args = std::move(args);
  return std::make_shared<const Expr>(std::move(e));
}

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

std::string Expr::to_string() const {
  auto bin = [&](const char* op) { return "(" + args[0]->to_string() + op + args[1]->to_string() + ")"; };
  switch (kind) {
    case Kind::Number:
      return ahg::to_string(number);
    case Kind::Symbol:
      return name;
    case Kind::Call: {
      std::string s = name + "(";
      for (std::size_t k = 0; k < args.size(); ++k) s += (k ? ", " : "") + args[k]->to_string();
      return s + ")";
    }
    case Kind::Add:
      return bin(" + ");
    case Kind::Sub:
      return bin(" - ");
    case Kind::Mul:
      return bin("*");
    case Kind::Div:
      return bin("/");
    case Kind::Neg:
      return "-" + args[0]->to_string();
    case Kind::Pow:
      return bin("^");
  }
  return "?";
}

Poly to_poly(const ExprPtr& e, const std::map<std::string, std::size_t>& vars, std::size_t nvars, const Scope& scope) {
  return lower(e, vars, nvars, scope, 0);
}

Rational to_rational(const ExprPtr& e, const Scope& scope) {
  Poly p = to_poly(e, {}, 0, scope);
  if (!p.is_constant() || !p.constant_term().is_real())
    throw ParseError("expected a rational constant, got '" + e->to_string() + "'");
  return p.constant_term().re();
}

Poly to_r_poly(const ExprPtr& e, const Scope& scope) { return to_poly(e, {{"r", 0}}, 1, scope); }

AffineR to_affine_r(const ExprPtr& e, const Scope& scope) {
  Poly p = to_r_poly(e, scope);
  if (p.degree(0) > 1) throw ParseError("expected an affine function of r, got '" + e->to_string() + "'");
  AffineR out;
  for (const auto& [m, c] : p.terms()) {
    if (!c.is_real()) throw ParseError("expected real coefficients in '" + e->to_string() + "'");
    (m[0] == 0 ? out.c0 : out.c1) = c.re();
  }
  return out;
}

std::string AffineR::to_string() const {
  if (sgn(c1) == 0) return ahg::to_string(c0);
  std::string r = c1 == 1 ? "r" : c1 == -1 ? "-r" : ahg::to_string(c1) + "*r";
  if (sgn(c0) == 0) return r;
  return r + (sgn(c0) > 0 ? "+" : "") + ahg::to_string(c0);
}

std::vector<std::string> split_top_level(std::string_view text, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }
  return out;
}

}  // namespace ahg
